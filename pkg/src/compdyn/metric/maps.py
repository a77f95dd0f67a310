"""Circle maps on [0, 1) and their orbits."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..core.oracles import RealOracle, oracle_from_rational

_WINDOW = 53
_CHUNK = 1 << 16


def frac_part(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def circle_dist(x, y):
    """min(|x - y|, 1 - |x - y|) for floats or float arrays."""
    t = np.abs(np.asarray(x) - np.asarray(y)) % 1.0
    return np.minimum(t, 1.0 - t)


def _wrap(a: np.ndarray) -> np.ndarray:
    a = np.mod(a, 1.0)
    return np.where(a >= 1.0, 0.0, a)


@dataclass(frozen=True)
class OrbitSample:
    """Orbit segment x, f(x), ..., f^{N-1}(x) as floats, each within ``error`` of the true point."""

    start: Fraction
    points: np.ndarray = field(repr=False)
    error: float = 2.0 ** -52
    map_name: str = ""

    @property
    def N(self) -> int:
        return len(self.points)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "point"])
        for k, x in enumerate(self.points):
            w.writerow([k, repr(float(x))])
        return buf.getvalue()


class IntervalMap:
    name = "map"
    grid_exact = False      # float evaluation is exact on dyadic grids

    def exact(self, x: Fraction) -> Fraction:
        raise NotImplementedError

    def apply(self, arr: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def orbit(self, x0, N: int) -> OrbitSample:
        """Generic float iteration; subclasses override with accurate schemes."""
        x0 = Fraction(x0)
        pts = np.empty(N)
        x = np.array([float(frac_part(x0))])
        for t in range(N):
            pts[t] = x[0]
            x = self.apply(x)
        return OrbitSample(x0, pts, float("nan"), self.name)

    def bowen_radius(self, n: int, eps: Fraction):
        """r such that d_n(x, y) < eps exactly when d(x, y) < r, if the map admits one; else None."""
        return None

    def exact_orbit(self, x0, N: int) -> list[Fraction]:
        x = frac_part(Fraction(x0))
        out = []
        for _ in range(N):
            out.append(x)
            x = self.exact(x)
        return out


class Doubling(IntervalMap):
    """x -> 2x mod 1."""

    name = "doubling"
    grid_exact = True

    def exact(self, x: Fraction) -> Fraction:
        return frac_part(2 * Fraction(x))

    def apply(self, arr):
        return _wrap(2.0 * np.asarray(arr, dtype=float))

    def bowen_radius(self, n: int, eps: Fraction):
        # below 1/4 no distance wraps around before reaching eps, so d(f^k x, f^k y) = 2^k d(x, y)
        eps = Fraction(eps)
        if eps <= Fraction(1, 4):
            return eps / 2 ** (n - 1)
        return None

    def orbit(self, x0, N: int) -> OrbitSample:
        """Binary-digit windows: f^t(x) is read off digits t..t+52 of x, which is
        exact to 2^-53 however long the expansion.  Needs x = a / (q 2^k) with q
        odd and small; otherwise falls back to exact integer iteration."""
        x0 = frac_part(Fraction(x0))
        a, b = x0.numerator, x0.denominator
        k = (b & -b).bit_length() - 1
        q = b >> k
        pts = np.empty(N)
        if q.bit_length() > 64:
            for t in range(N):
                pts[t] = (a << 60) // b / 2.0 ** 60
                a = (2 * a) % b
            return OrbitSample(x0, pts, 2.0 ** -52, self.name)
        # x = B / 2^k + c / (q 2^k) with 0 <= c < q
        B, c = divmod(a, q)
        head = max(0, min(N, k - 64))
        if head:
            nbytes = (k + 7) // 8
            bits = np.unpackbits(np.frombuffer(B.to_bytes(nbytes, "big"), dtype=np.uint8))
            bits = bits[len(bits) - k:]                     # bits[j] multiplies 2^-(j+1)
            bits = np.concatenate([bits, np.zeros(_WINDOW, dtype=np.uint8)])
            weights = 2.0 ** -np.arange(1, _WINDOW + 1)
            win = np.lib.stride_tricks.sliding_window_view(bits, _WINDOW)
            for s in range(0, head, _CHUNK):
                e = min(head, s + _CHUNK)
                pts[s:e] = win[s:e].astype(float) @ weights
        # remaining points exactly: a_t = a 2^t mod b, using b = q 2^k to avoid a long division
        at = (q * ((B << head) & ((1 << k) - 1)) + (c << head)) % b
        for t in range(head, N):
            pts[t] = (at << 60) // b / 2.0 ** 60
            at = (2 * at) % b
        return OrbitSample(x0, pts, 2.0 ** -52, self.name)


class Rotation(IntervalMap):
    """x -> x + alpha mod 1 with alpha given by an oracle or a rational."""

    name = "rotation"

    def __init__(self, alpha):
        self.alpha = alpha if isinstance(alpha, RealOracle) else oracle_from_rational(alpha)
        self._alpha_f = float(self.alpha(60))

    def exact(self, x: Fraction) -> Fraction:
        if self.alpha.exact is None:
            raise ValueError("rotation by an irrational oracle has no exact rational evaluation")
        return frac_part(Fraction(x) + self.alpha.exact)

    def apply(self, arr):
        return _wrap(np.asarray(arr, dtype=float) + self._alpha_f)

    def bowen_radius(self, n: int, eps: Fraction):
        return Fraction(eps)    # isometry

    def orbit(self, x0, N: int) -> OrbitSample:
        """Fixed point with 64 fractional bits; wraparound of uint64 is reduction mod 1."""
        x0 = frac_part(Fraction(x0))
        A = int(frac_part(self.alpha(70)) * (1 << 64)) % (1 << 64)
        X0 = int(x0 * (1 << 64)) % (1 << 64)
        t = np.arange(N, dtype=np.uint64)
        with np.errstate(over="ignore"):
            vals = np.uint64(X0) + t * np.uint64(A)
        pts = vals.astype(float) / 2.0 ** 64
        pts = np.where(pts >= 1.0, 0.0, pts)
        return OrbitSample(x0, pts, N * 2.0 ** -63 + 2.0 ** -53, self.name)


class TableMap(IntervalMap):
    """Piecewise-linear map through (j/K, values[j]) for j = 0..K, reduced mod 1.

    ``values`` has K + 1 entries; use values[K] = values[0] + integer for a circle map.
    """

    name = "table"

    def __init__(self, values: Sequence):
        if len(values) < 2:
            raise ValueError("need at least two table values")
        self.values = [Fraction(v) for v in values]
        self.K = len(values) - 1
        self._nodes = np.linspace(0.0, 1.0, self.K + 1)
        self._vals = np.array([float(v) for v in self.values])

    def exact(self, x: Fraction) -> Fraction:
        x = frac_part(Fraction(x))
        j = min(int(x * self.K), self.K - 1)
        s = x * self.K - j
        return frac_part(self.values[j] + s * (self.values[j + 1] - self.values[j]))

    def apply(self, arr):
        return _wrap(np.interp(np.asarray(arr, dtype=float), self._nodes, self._vals))


def make_map(kind: str, alpha=None, table=None) -> IntervalMap:
    if kind == "doubling":
        return Doubling()
    if kind == "rotation":
        return Rotation(alpha if alpha is not None else Fraction(0))
    if kind == "table":
        return TableMap(table)
    raise ValueError(f"unknown map {kind!r}")


def pseudo_random_point(seed: int, k: int = 128) -> Fraction:
    """(3B + 1) / (3 * 2^k) with B uniform on k bits: a non-dyadic point whose
    binary digits are those of B (then 0101... forever)."""
    rng = np.random.default_rng(seed)
    nbytes = (k + 7) // 8
    B = int.from_bytes(rng.bytes(nbytes), "big") >> (8 * nbytes - k)
    return Fraction(3 * B + 1, 3 << k)
