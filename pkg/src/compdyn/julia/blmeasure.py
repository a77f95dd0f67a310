"""Backward-iteration approximations of the Brolin-Lyubich measure."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from ..errors import ExceptionalPoint
from ..measures.measure import PLANAR, DiscreteMeasure
from .poly import PolySpec, escape_radius
from .roots import solve_preimages

FULL_LIMIT = 1 << 20


@dataclass(frozen=True)
class PreimageTree:
    """Levels of backward orbits of ``root``.

    Full mode: ``levels[k]`` has d^k points and the children of node i at
    level k are entries i*d .. i*d + d - 1 of level k + 1.  Monte Carlo mode:
    ``levels[k][j]`` is the depth-k point of path j (its parent is
    ``levels[k-1][j]``).
    """

    root: complex
    depth: int
    d: int
    levels: tuple = field(repr=False)
    residual: float                # max |f(child) - parent| bound over the tree
    mode: str = "full"

    @property
    def leaves(self) -> np.ndarray:
        return self.levels[-1]

    def parents(self, k: int) -> np.ndarray:
        """Parent of every level-k node (k >= 1)."""
        if self.mode == "full":
            return np.repeat(self.levels[k - 1], self.d)
        return self.levels[k - 1]


def _check_exceptional(f: PolySpec, z0: complex):
    if f.is_monomial() and z0 == 0:
        raise ExceptionalPoint("0 is a fully invariant point of z^d")


def default_start(f: PolySpec) -> complex:
    return complex(float(escape_radius(f)) + 1.0, 0.0)


def _tree_full(f: PolySpec, z0: complex, n: int, tol: float):
    levels = [np.array([z0])]
    worst = 0.0
    for _ in range(n):
        w, res = solve_preimages(f, levels[-1], tol)
        levels.append(w.reshape(-1))
        worst = max(worst, float(res.max()))
    return levels, worst


def path_choices(seed: int, paths: int, n: int, d: int) -> np.ndarray:
    """Child index per (path, level); path j draws from its own stream keyed by (seed, j),
    so the result does not depend on how paths are scheduled."""
    out = np.empty((paths, n), dtype=np.int64)
    for j in range(paths):
        out[j] = np.random.Generator(np.random.Philox(key=[seed, j])).integers(0, d, n)
    return out


def _tree_monte_carlo(f: PolySpec, z0: complex, n: int, tol: float, paths: int, seed: int):
    choice = path_choices(seed, paths, n, f.d)
    cur = np.full(paths, z0, dtype=complex)
    levels = [cur]
    worst = 0.0
    for k in range(n):
        # paths sharing a node solve the same equation; solve each distinct node once
        uniq, inv = np.unique(cur, return_inverse=True)
        w, res = solve_preimages(f, uniq, tol)
        worst = max(worst, float(res.max()))
        cur = w[inv.reshape(-1), choice[:, k]]
        levels.append(cur)
    return levels, worst


@dataclass(frozen=True)
class BLResult:
    measure: DiscreteMeasure
    tree: PreimageTree
    tol: float

    def to_json(self) -> dict:
        out = self.measure.to_json()
        out["depth"] = self.tree.depth
        out["mode"] = self.tree.mode
        out["residual_bound"] = self.tree.residual
        return out


def bl_measure_approx(f: PolySpec, z0=None, n: int = 8, tol=1e-9, sampling: str = "full",
                      paths: int = 1 << 14, seed: int = 0) -> BLResult:
    """(1/d^n) sum over w in f^{-n}(z0) of delta_w, or a Monte Carlo sample of it.

    Atoms are the float leaves (exact dyadic rationals), each with
    |f(child) - parent| < tol along its branch.  Monte Carlo mode walks
    ``paths`` random branches, one uniform child per level, and weighs each
    leaf 1/paths.
    """
    tol = float(tol)
    z0 = default_start(f) if z0 is None else complex(z0)
    _check_exceptional(f, z0)
    if n < 1:
        raise ValueError("depth must be at least 1")
    if sampling == "full":
        if f.d ** n > FULL_LIMIT:
            raise ValueError(f"full tree has {f.d}^{n} leaves, above the 2^20 cap")
        levels, worst = _tree_full(f, z0, n, tol)
        w = Fraction(1, f.d ** n)
    elif sampling in ("monte_carlo", "mc"):
        if paths < 1:
            raise ValueError("paths must be positive")
        levels, worst = _tree_monte_carlo(f, z0, n, tol, paths, seed)
        w = Fraction(1, paths)
        sampling = "monte_carlo"
    else:
        raise ValueError(f"unknown sampling {sampling!r}")
    tree = PreimageTree(z0, n, f.d, tuple(levels), worst, sampling)
    leaves = levels[-1]
    atoms = [((Fraction(float(p.real)), Fraction(float(p.imag))), w) for p in leaves]
    return BLResult(DiscreteMeasure(atoms, PLANAR), tree, tol)


def pushforward_residual(f: PolySpec, tree: PreimageTree, k: Optional[int] = None) -> float:
    """max over level-k nodes of |f(node) - parent| in float arithmetic (k defaults to the leaves)."""
    k = tree.depth if k is None else k
    pts = tree.levels[k]
    return float(np.max(np.abs(f(pts) - tree.parents(k))))
