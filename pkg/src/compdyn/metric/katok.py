"""Birkhoff empirical measures and the Katok-Brin local entropy estimator."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import ZeroHits
from ..measures.measure import CIRCLE, DiscreteMeasure
from .maps import IntervalMap, OrbitSample, circle_dist

# below this many points the orbit is followed in exact rational arithmetic when possible
_EXACT_LIMIT = 4096


def birkhoff_measure(f: IntervalMap, x, N: int, exact: bool | None = None) -> DiscreteMeasure:
    """(1/N) sum_{k<N} delta_{f^k x} on the circle.

    Atoms are exact orbit points when ``exact`` (default: N small and the map
    evaluates exactly); otherwise the float orbit points, which are dyadic
    rationals within the orbit's stated error of the true points.
    """
    if N < 1:
        raise ValueError("N must be positive")
    if exact is None:
        exact = N <= _EXACT_LIMIT and _has_exact(f)
    if exact:
        pts = f.exact_orbit(x, N)
    else:
        pts = [Fraction(float(v)) for v in f.orbit(x, N).points]
    w = Fraction(1, N)
    zero = Fraction(0)
    return DiscreteMeasure((((p, zero), w) for p in pts), CIRCLE)


def _has_exact(f: IntervalMap) -> bool:
    alpha = getattr(f, "alpha", None)
    return alpha is None or alpha.exact is not None


@dataclass(frozen=True)
class KatokBrinEstimate:
    value: float
    n: int
    m: int
    hits_n: int
    hits_m: int
    trials: int
    method: str

    def to_json(self) -> dict:
        return dict(self.__dict__)


def bowen_hits(orbit: OrbitSample, eps: float, horizons) -> dict[int, int]:
    """For each horizon h, the number of t in [1, N - n_max] with
    max_{k<h} d(x_{t+k}, x_k) < eps, where n_max is the largest horizon."""
    pts = orbit.points
    n_max = max(horizons)
    T = len(pts) - n_max
    if T < 1:
        raise ValueError("orbit shorter than the Bowen horizon")
    inside = np.ones(T, dtype=bool)
    out = {}
    wanted = set(horizons)
    for k in range(n_max):
        inside &= circle_dist(pts[1 + k:1 + k + T], pts[k]) < eps
        if k + 1 in wanted:
            out[k + 1] = int(inside.sum())
    return out


def katok_brin_estimate(orbit: OrbitSample, eps, n: int, method: str = "ratio") -> KatokBrinEstimate:
    """Local entropy of the orbit's starting point from Bowen-ball return frequencies.

    ``direct`` returns -log(fraction_n) / n, the literal finite-n quotient.  Its
    bias is log(1/mu(B_1)) / n, which dominates at desk-scale n, so the default
    ``ratio`` method returns -(log fraction_n - log fraction_m) / (n - m) with
    m = n // 2 over the same return times, cancelling the eps-dependent prefactor.
    Statistical estimate, no certified error.  Raises ZeroHits when the Bowen
    ball is never revisited; its ``bound`` is log(N) / n.
    """
    eps = float(eps)
    if n < 1:
        raise ValueError("n must be positive")
    m = n // 2 if method == "ratio" else 0
    if method == "ratio" and m < 1:
        raise ValueError("ratio method needs n >= 2")
    horizons = [n] + ([m] if m else [])
    hits = bowen_hits(orbit, eps, horizons)
    T = len(orbit.points) - n
    hn = hits[n]
    if hn == 0:
        raise ZeroHits(math.log(T) / n)
    if method == "direct":
        value = -math.log(hn / T) / n
        return KatokBrinEstimate(value, n, 0, hn, T, T, method)
    if method != "ratio":
        raise ValueError(f"unknown method {method!r}")
    hm = hits[m]
    value = (math.log(hm) - math.log(hn)) / (n - m)
    return KatokBrinEstimate(value, n, m, hn, hm, T, method)
