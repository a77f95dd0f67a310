"""Preimages under a polynomial by simultaneous (Aberth-Ehrlich) iteration."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..errors import NoConvergence
from .poly import PolySpec

MAX_ITER = 200
_U = 2.0 ** -53


def _horner(coeffs: np.ndarray, w: np.ndarray):
    """p(w) and p'(w) for rows of coefficients (M, d+1) at points (M, k)."""
    p = np.ones_like(w)
    dp = np.zeros_like(w)
    for j in range(1, coeffs.shape[1]):
        dp = dp * w + p
        p = p * w + coeffs[:, j, None]
    return p, dp


def _abs_horner(coeffs: np.ndarray, w: np.ndarray):
    a = np.abs(w)
    acc = np.ones_like(a)
    for j in range(1, coeffs.shape[1]):
        acc = acc * a + np.abs(coeffs[:, j, None])
    return acc


def aberth(coeffs: np.ndarray, max_iter: int = MAX_ITER, phase: float = 0.4):
    """All roots of each monic row of ``coeffs`` (shape (M, d+1), leading entry 1).

    Starts are equispaced on the circle of radius 1 + max|a_j|^(1/d); ``phase``
    rotates them (change it to retry from perturbed starts).  Returns the (M, d)
    root array and a per-row convergence flag.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    M, d1 = coeffs.shape
    d = d1 - 1
    rad = 1.0 + np.max(np.abs(coeffs[:, 1:]), axis=1) ** (1.0 / d)
    ang = phase + 2 * np.pi * np.arange(d) / d
    w = rad[:, None] * np.exp(1j * ang)[None, :]
    active = np.ones(M, dtype=bool)
    eye = np.eye(d, dtype=bool)
    for _ in range(max_iter):
        idx = np.nonzero(active)[0]
        if len(idx) == 0:
            break
        wa, ca = w[idx], coeffs[idx]
        p, dp = _horner(ca, wa)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dp != 0, p / dp, 0)
            diff = wa[:, :, None] - wa[:, None, :]
            diff[:, eye] = np.inf
            s = np.sum(1.0 / diff, axis=2)
            step = ratio / (1.0 - ratio * s)
        step = np.where(np.isfinite(step), step, 0)
        wa = wa - step
        w[idx] = wa
        small = np.all(np.abs(step) <= 4 * _U * (1 + np.abs(wa)), axis=1) | np.all(p == 0, axis=1)
        active[idx[small]] = False
    return w, ~active


def newton_polish(coeffs: np.ndarray, w: np.ndarray, steps: int = 3) -> np.ndarray:
    """A few Newton steps, each kept only where it lowers the residual."""
    for _ in range(steps):
        p, dp = _horner(coeffs, w)
        with np.errstate(divide="ignore", invalid="ignore"):
            cand = w - np.where(dp != 0, p / dp, 0)
        cand = np.where(np.isfinite(cand), cand, w)
        pc, _ = _horner(coeffs, cand)
        w = np.where(np.abs(pc) < np.abs(p), cand, w)
    return w


def residual_bound(coeffs: np.ndarray, w: np.ndarray, coeff_err: float = 0.0) -> np.ndarray:
    """Upper bound on |p(w)| for the exact coefficients.

    Float Horner plus the standard a-priori bound on its rounding error
    (complex Horner of degree d: gamma_{4d+4} times the absolute polynomial);
    ``coeff_err`` bounds the distance of each float coefficient from the exact one.
    """
    d = coeffs.shape[1] - 1
    p, _ = _horner(coeffs, w)
    absp = _abs_horner(coeffs, w)
    gamma = (4 * d + 4) * _U / (1 - (4 * d + 4) * _U)
    tail = 0.0
    if coeff_err:
        a = np.abs(w)
        tail = coeff_err * sum(a ** j for j in range(d))
    return (np.abs(p) + gamma * absp + tail) * (1 + 4 * _U)


def cluster_sizes(points, radius: float) -> list[int]:
    """For each point the size of its cluster (connected components at ``radius``)."""
    pts = np.asarray(points)
    k = len(pts)
    parent = list(range(k))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(k):
        for j in range(i):
            if abs(pts[i] - pts[j]) < radius:
                parent[find(i)] = find(j)
    roots = [find(i) for i in range(k)]
    return [roots.count(r) for r in roots]


def _coeff_rows(f: PolySpec, targets: np.ndarray) -> tuple[np.ndarray, float]:
    base = f.complex_coeffs()
    rows = np.tile(base, (len(targets), 1))
    rows[:, -1] = base[-1] - targets
    # distance between the float and exact coefficients
    err = 0.0
    for (x, y), c in zip(f.approx_coeffs(60), base[1:]):
        err = max(err, abs(float(x - Fraction(c.real))) + abs(float(y - Fraction(c.imag))))
    if not f.is_exact:
        err += 2.0 ** -59
    return rows, err


def solve_preimages(f: PolySpec, targets, tol: float, phase: float = 0.4, max_iter: int = MAX_ITER):
    """Roots of f(w) = z for every target z (float path, vectorized).

    Returns (roots (M, d) in canonical angular order, residual bounds (M, d)).
    Raises NoConvergence when some residual bound is not below ``tol``.
    """
    targets = np.atleast_1d(np.asarray(targets, dtype=complex))
    rows, cerr = _coeff_rows(f, targets)
    w, _ = aberth(rows, max_iter, phase)
    w = newton_polish(rows, w)
    res = residual_bound(rows, w, cerr)
    bad = ~(res < tol)
    if bad.any():
        # one retry from rotated starts for the failing rows
        idx = np.nonzero(bad.any(axis=1))[0]
        w2, _ = aberth(rows[idx], max_iter, phase + 0.7)
        w2 = newton_polish(rows[idx], w2)
        r2 = residual_bound(rows[idx], w2, cerr)
        better = r2.max(axis=1) < res[idx].max(axis=1)
        w[idx[better]] = w2[better]
        res[idx[better]] = r2[better]
        if not (res < tol).all():
            raise NoConvergence(f"preimage residual {float(res.max()):.3g} not below tol {tol:.3g}")
    order = np.lexsort((np.abs(w), np.mod(np.angle(w), 2 * np.pi)), axis=-1)
    return np.take_along_axis(w, order, -1), np.take_along_axis(res, order, -1)


@dataclass(frozen=True)
class PreimageResult:
    target: complex
    points: tuple
    residuals: tuple
    multiplicity: tuple = field(default=())    # size of the cluster containing each point

    @property
    def clustered(self) -> bool:
        return any(m > 1 for m in self.multiplicity)

    def to_json(self) -> dict:
        return {"target": [self.target.real, self.target.imag],
                "points": [[p.real, p.imag] for p in self.points],
                "residual_bounds": list(self.residuals),
                "multiplicity": list(self.multiplicity)}


def preimages(f: PolySpec, z, tol=1e-12, phase: float = 0.4) -> PreimageResult:
    """The d solutions of f(w) = z, each with certified residual |f(w) - z| < tol.

    Roots closer than 10 tol are reported as one cluster (multiplicity flags);
    a double root of f(w) - z is only located to about sqrt(tol).
    """
    tol = float(tol)
    if not tol > 0:
        raise ValueError("tol must be positive")
    z = complex(z) if not isinstance(z, (tuple, list)) else complex(float(z[0]), float(z[1]))
    w, res = solve_preimages(f, [z], tol, phase)
    pts = tuple(complex(v) for v in w[0])
    mult = tuple(cluster_sizes(pts, 10 * tol))
    return PreimageResult(z, pts, tuple(float(r) for r in res[0]), mult)
