"""Finitely supported probability measures and the metrics they live in."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Callable, Iterable, Optional

import numpy as np

from ..errors import InfeasibleWeights

PLANAR = "planar"
SPHERICAL = "spherical"
CIRCLE = "circle"
METRICS = (PLANAR, SPHERICAL, CIRCLE)

# the point at infinity of the Riemann sphere
INF = None

DEFAULT_PWORK = 53


def _frac_pair(p) -> Optional[tuple[Fraction, Fraction]]:
    if p is None:
        return None
    if type(p) is tuple and len(p) == 2 and type(p[0]) is Fraction and type(p[1]) is Fraction:
        return p
    if isinstance(p, complex):
        return Fraction(p.real), Fraction(p.imag)
    if isinstance(p, (tuple, list)):
        x, y = p
        return Fraction(x), Fraction(y)
    return Fraction(p), Fraction(0)


def _point_key(p):
    # floats first so that the exact comparison only settles ties
    return (1,) if p is None else (0, float(p[0]), float(p[1]), p[0], p[1])


@dataclass(frozen=True)
class DiscreteMeasure:
    """Atoms ``((x, y), w)`` with exact rational coordinates and weights.

    Equal points are merged and atoms are kept sorted, so equal measures have
    equal representations.  ``None`` stands for the point at infinity (spherical
    metric only).  Circle measures use the x coordinate modulo 1.
    """

    atoms: tuple
    metric: str = PLANAR
    _coords: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    def __init__(self, atoms: Iterable, metric: str = PLANAR, merge_tol=0, check: bool = True):
        if metric not in METRICS:
            raise ValueError(f"unknown metric {metric!r}")
        merged: dict = {}
        for p, w in atoms:
            p = _frac_pair(p)
            if metric == CIRCLE and p is not None and not (0 <= p[0] < 1 and p[1] == 0):
                p = (p[0] - (p[0].numerator // p[0].denominator), Fraction(0))
            if type(w) is not Fraction:
                w = Fraction(w)
            merged[p] = merged.get(p, Fraction(0)) + w
        items = sorted(merged.items(), key=lambda t: _point_key(t[0]))
        if merge_tol:
            items = _merge_close(items, float(merge_tol), metric)
        if check:
            if any(w <= 0 for _, w in items):
                raise InfeasibleWeights("weights must be positive")
            if sum(w for _, w in items) != 1:
                raise InfeasibleWeights("weights must sum to exactly 1")
        object.__setattr__(self, "atoms", tuple(items))
        object.__setattr__(self, "metric", metric)
        object.__setattr__(self, "_coords", None)

    def __len__(self):
        return len(self.atoms)

    @property
    def points(self) -> list:
        return [p for p, _ in self.atoms]

    @property
    def weights(self) -> list[Fraction]:
        return [w for _, w in self.atoms]

    @property
    def total_mass(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def coords(self) -> np.ndarray:
        """Float coordinates, shape (n, 2); infinity maps to (inf, inf)."""
        if self._coords is None:
            arr = np.array(
                [(float(p[0]), float(p[1])) if p is not None else (np.inf, np.inf) for p in self.points],
                dtype=float,
            ).reshape(-1, 2)
            object.__setattr__(self, "_coords", arr)
        return self._coords

    def weights_float(self) -> np.ndarray:
        return np.array([float(w) for w in self.weights])

    def is_uniform(self) -> bool:
        w0 = self.atoms[0][1]
        return all(w == w0 for _, w in self.atoms)

    def with_metric(self, metric: str) -> "DiscreteMeasure":
        return DiscreteMeasure(self.atoms, metric)

    def to_json(self) -> dict:
        atoms = []
        for p, w in self.atoms:
            if p is None:
                atoms.append({"x": "inf", "y": "inf", "w": str(w)})
            else:
                atoms.append({"x": str(p[0]), "y": str(p[1]), "w": str(w)})
        return {"atoms": atoms, "metric": self.metric}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, data) -> "DiscreteMeasure":
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        atoms = []
        for a in data["atoms"]:
            if a["x"] == "inf":
                atoms.append((None, Fraction(a["w"])))
            else:
                atoms.append(((Fraction(a["x"]), Fraction(a.get("y", "0"))), Fraction(a["w"])))
        return cls(atoms, data.get("metric", PLANAR))


def _merge_close(items, tol: float, metric: str):
    """Union atoms closer than ``tol``; each cluster keeps its first point."""
    pts = [p for p, _ in items]
    finite = [i for i, p in enumerate(pts) if p is not None]
    if len(finite) < 2:
        return items
    from scipy.spatial import cKDTree

    xy = np.array([(float(pts[i][0]), float(pts[i][1])) for i in finite])
    if metric == CIRCLE:
        tree = cKDTree(np.mod(xy[:, :1], 1.0), boxsize=1.0)
    else:
        tree = cKDTree(xy)
    parent = list(range(len(finite)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in sorted(tree.query_pairs(tol)):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    out: dict = {}
    for k, i in enumerate(finite):
        root = finite[find(k)]
        out[root] = out.get(root, Fraction(0)) + items[i][1]
    res = [(pts[i], out[i]) for i in sorted(out)]
    res += [items[i] for i, p in enumerate(pts) if p is None]
    return res


# ---------------------------------------------------------------- metrics

def _sqrt_floor_scaled(q: Fraction, p: int) -> int:
    """floor(sqrt(q) * 2^p) for rational q >= 0."""
    return isqrt((q.numerator << (2 * p)) // q.denominator)


def squared_metric(kind: str, a, b) -> Fraction:
    """The squared distance as an exact rational (planar and spherical)."""
    if kind == PLANAR:
        return (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2
    if kind == SPHERICAL:
        if a is None and b is None:
            return Fraction(0)
        if a is None or b is None:
            z = b if a is None else a
            return Fraction(4) / (1 + z[0] ** 2 + z[1] ** 2)
        num = 4 * ((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2)
        return num / ((1 + a[0] ** 2 + a[1] ** 2) * (1 + b[0] ** 2 + b[1] ** 2))
    raise ValueError(f"{kind} distance is not a square root")


def circle_distance(x: Fraction, y: Fraction) -> Fraction:
    t = abs(x - y)
    t -= t.numerator // t.denominator
    return min(t, 1 - t)


def metric_floor(kind: str, a, b, p: int = DEFAULT_PWORK) -> int:
    """floor(d(a, b) * 2^p), exactly."""
    if kind == CIRCLE:
        d = circle_distance(a[0], b[0])
        return (d.numerator << p) // d.denominator
    return _sqrt_floor_scaled(squared_metric(kind, a, b), p)


def metric_eval(kind: str, a, b, p: int = DEFAULT_PWORK) -> Fraction:
    """d(a, b) rounded down to a multiple of 2^-p (error below 2^-p).

    Points are pairs, complex numbers or reals; ``None`` is infinity.
    """
    a, b = _frac_pair(a), _frac_pair(b)
    if kind == CIRCLE:
        return circle_distance(a[0], b[0])
    if kind == PLANAR and (a is None or b is None):
        raise ValueError("infinity is only available in the spherical metric")
    return Fraction(metric_floor(kind, a, b, p), 1 << p)


def metric_float(kind: str, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Pairwise float distances between coordinate arrays of shape (n, 2) and (m, 2)."""
    if kind == CIRCLE:
        t = np.abs(A[:, None, 0] - B[None, :, 0]) % 1.0
        return np.minimum(t, 1.0 - t)
    diff = np.hypot(A[:, None, 0] - B[None, :, 0], A[:, None, 1] - B[None, :, 1])
    if kind == PLANAR:
        return diff
    na = 1 + A[:, 0] ** 2 + A[:, 1] ** 2
    nb = 1 + B[:, 0] ** 2 + B[:, 1] ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        d = 2 * diff / np.sqrt(na[:, None] * nb[None, :])
        ia = ~np.isfinite(na)
        ib = ~np.isfinite(nb)
        d[ia, :] = (2 / np.sqrt(nb))[None, :].repeat(ia.sum(), 0)
        d[:, ib] = (2 / np.sqrt(na))[:, None].repeat(ib.sum(), 1)
        d[np.ix_(ia, ib)] = 0.0
    return d


# ---------------------------------------------------------------- constructions

def dirac(point, metric: str = PLANAR) -> DiscreteMeasure:
    return DiscreteMeasure([(point, 1)], metric)


def uniform(points, metric: str = PLANAR, merge_tol=0) -> DiscreteMeasure:
    points = list(points)
    w = Fraction(1, len(points))
    return DiscreteMeasure([(p, w) for p in points], metric, merge_tol=merge_tol)


def pushforward(mu: DiscreteMeasure, fmap: Callable, metric: Optional[str] = None, merge_tol=0) -> DiscreteMeasure:
    """Image measure: atoms mapped through ``fmap`` and coinciding images merged."""
    return DiscreteMeasure(((fmap(p), w) for p, w in mu.atoms), metric or mu.metric, merge_tol=merge_tol)


def _dyadic_round(x, p: int) -> Fraction:
    import mpmath

    return Fraction(int(mpmath.nint(x * mpmath.mpf(2) ** p)), 1 << p)


def roots_of_unity(k: int, p: int = DEFAULT_PWORK, radius=1) -> list[tuple[Fraction, Fraction]]:
    """k-th roots of unity (times ``radius``), each coordinate rounded to 2^-p; quarter turns exact."""
    import mpmath

    exact = {0: (1, 0), 1: (0, 1), 2: (-1, 0), 3: (0, -1)}
    out = []
    with mpmath.workprec(p + 40):
        r = mpmath.mpf(radius) if not isinstance(radius, Fraction) else mpmath.mpf(radius.numerator) / radius.denominator
        for j in range(k):
            if (4 * j) % k == 0 and r == 1:
                c, s = exact[4 * j // k]
                out.append((Fraction(c), Fraction(s)))
                continue
            t = 2 * mpmath.pi * j / k
            out.append((_dyadic_round(r * mpmath.cos(t), p), _dyadic_round(r * mpmath.sin(t), p)))
    return out


def discretize_reference(kind: str, k: int, p: int = DEFAULT_PWORK, metric: Optional[str] = None) -> DiscreteMeasure:
    """``uniform-circle``: k-th roots of unity; ``lebesgue-interval``: midpoints (2j+1)/2k."""
    if k < 1:
        raise ValueError("k must be positive")
    if kind in ("uniform-circle", "circle"):
        return uniform(roots_of_unity(k, p), metric or PLANAR)
    if kind in ("lebesgue-interval", "lebesgue", "interval"):
        return uniform([(Fraction(2 * j + 1, 2 * k), Fraction(0)) for j in range(k)], metric or CIRCLE)
    raise ValueError(f"unknown reference measure {kind!r}")


def parse_reference(spec: str, p: int = DEFAULT_PWORK) -> DiscreteMeasure:
    """Parse ``uniform-circle(4096)`` or ``lebesgue-interval(100)``."""
    spec = spec.strip()
    if "(" not in spec or not spec.endswith(")"):
        raise ValueError(f"expected name(k), got {spec!r}")
    name, k = spec[:-1].split("(", 1)
    return discretize_reference(name.strip(), int(k), p)
