"""Certified enclosures of the spectral radius of nonnegative integer matrices."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .graphs import strong_components

_SEED_BITS = 60


def _integer_vector(x, bits: int) -> list[int]:
    x = np.abs(np.asarray(x, dtype=float))
    top = float(x.max()) if x.size else 1.0
    if not np.isfinite(top) or top <= 0:
        return [1] * len(x)
    return [max(1, int(round(v / top * 2.0 ** bits))) for v in x]


def _float_seed(B) -> list[int]:
    M = np.array(B, dtype=float)
    try:
        w, V = np.linalg.eig(M)
        k = int(np.argmax(w.real))
        return _integer_vector(V[:, k].real, _SEED_BITS)
    except np.linalg.LinAlgError:
        return [1] * len(B)


def _mp_seed(B, bits: int) -> list[int]:
    import mpmath

    with mpmath.workprec(bits + 40):
        M = mpmath.matrix([[int(a) for a in row] for row in B])
        w, V = mpmath.eig(M)
        k = max(range(len(w)), key=lambda i: mpmath.re(w[i]))
        col = [abs(mpmath.re(V[i, k])) for i in range(len(B))]
        top = max(col)
        if top == 0:
            return [1] * len(B)
        return [max(1, int(mpmath.nint(c / top * mpmath.mpf(2) ** (bits + 8)))) for c in col]


def _cw_bounds(rows, v) -> tuple[Fraction, Fraction, list[int]]:
    """Collatz-Wielandt bounds for C = B + I given as sparse rows, and C v."""
    w = [v[i] + sum(a * v[j] for j, a in row) for i, row in enumerate(rows)]
    lo = hi = None
    for wi, vi in zip(w, v):
        r = Fraction(wi, vi)
        if lo is None or r < lo:
            lo = r
        if hi is None or r > hi:
            hi = r
    return lo, hi, w


def _irreducible_radius(B, p: int, max_iter: int = 20000) -> tuple[Fraction, Fraction]:
    n = len(B)
    if n == 1:
        r = Fraction(B[0][0])
        return r, r
    rows = [[(j, a) for j, a in enumerate(row) if a] for row in B]
    # constant row sums give the exact radius
    sums = {sum(a for _, a in row) for row in rows}
    if len(sums) == 1:
        r = Fraction(sums.pop())
        return r, r
    target = Fraction(1, 1 << (p + 1))
    keep_bits = p + 64
    v = _float_seed(B)
    seeded_mp = False
    for it in range(max_iter):
        lo, hi, w = _cw_bounds(rows, v)
        if hi - lo < target:
            break
        if it == 200 and not seeded_mp and n <= 120:
            v = _mp_seed(B, p + 16)
            seeded_mp = True
            continue
        shift = max(x.bit_length() for x in w) - keep_bits
        v = [max(1, x >> shift) for x in w] if shift > 0 else w
    # C = B + I, so subtract one
    return lo - 1, hi - 1


def perron_root_interval(A, p: int = 53) -> tuple[Fraction, Fraction]:
    """Interval of width < 2^-p containing the spectral radius of the nonnegative
    integer matrix ``A`` (list of rows or TransitionMatrix)."""
    A = getattr(A, "matrix", A)
    A = [[int(a) for a in row] for row in A]
    los, his = [], []
    for comp in strong_components(A):
        B = [[A[i][j] for j in comp] for i in comp]
        lo, hi = _irreducible_radius(B, p)
        los.append(lo)
        his.append(hi)
    if not los:
        return Fraction(0), Fraction(0)
    # rho = max over components; max(hi) - max(lo) never exceeds the widest component interval
    return max(los), max(his)
