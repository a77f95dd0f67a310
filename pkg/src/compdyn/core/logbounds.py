"""Certified natural-logarithm bounds for positive rationals.

``ln x = k ln 2 + 2 atanh((m-1)/(m+1))`` with ``m = x / 2**k`` in [1, 2), and
``ln 2 = 2 atanh(1/3)``.  The atanh series is summed in fixed point with each
term floored, so the truncation and tail errors are tracked exactly.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

_GUARD = 12


def _atanh_bounds(num: int, den: int, bits: int) -> tuple[int, int, int]:
    """Fixed-point bounds (lo, hi, F): lo/2^F <= atanh(num/den) <= hi/2^F, for 0 <= num/den <= 1/3."""
    F = bits + _GUARD
    if num == 0:
        return 0, 0, F
    total = 0
    count = 0
    pn, pd = num, den  # t^(2j+1)
    num2, den2 = num * num, den * den
    j = 0
    one_f = 1 << F
    while True:
        total += (pn << F) // (pd * (2 * j + 1))
        count += 1
        pn *= num2
        pd *= den2
        j += 1
        # tail <= t^(2j+1) / ((2j+1)(1 - t^2)) <= (9/8) t^(2j+1) / (2j+1)
        if 9 * pn * one_f <= 8 * pd * (2 * j + 1):
            break
    return total, total + count + 2, F


@lru_cache(maxsize=64)
def ln2_bounds(bits: int) -> tuple[Fraction, Fraction]:
    lo, hi, F = _atanh_bounds(1, 3, bits + 1)
    return Fraction(2 * lo, 1 << F), Fraction(2 * hi, 1 << F)


def _split(x: Fraction) -> tuple[int, Fraction]:
    k = x.numerator.bit_length() - x.denominator.bit_length()
    m = x / (2 ** k) if k >= 0 else x * (2 ** -k)
    if m < 1:
        k -= 1
        m *= 2
    elif m >= 2:
        k += 1
        m /= 2
    return k, m


def _round_rel(x: Fraction, sig: int, up: bool) -> Fraction:
    """Round x > 0 to ``sig`` significant bits, toward +inf if ``up``."""
    e = x.numerator.bit_length() - x.denominator.bit_length() - sig
    if e >= 0:
        n, d = x.numerator, x.denominator << e
    else:
        n, d = x.numerator << -e, x.denominator
    q, r = divmod(n, d)
    if up and r:
        q += 1
    return Fraction(q) * (Fraction(2) ** e)


def _log_bound(x: Fraction, bits: int, up: bool) -> Fraction:
    if x <= 0:
        raise ValueError("logarithm of a non-positive number")
    if x == 1:
        return Fraction(0)
    sig = bits + 2 * _GUARD
    if x.numerator.bit_length() + x.denominator.bit_length() > sig + 8:
        x = _round_rel(x, sig, up)
    k, m = _split(x)
    t = (m - 1) / (m + 1)
    lo, hi, F = _atanh_bounds(t.numerator, t.denominator, bits + 2)
    kbits = bits + 3 + abs(k).bit_length()
    l2lo, l2hi = ln2_bounds(kbits)
    if up:
        return k * (l2hi if k >= 0 else l2lo) + Fraction(2 * hi, 1 << F)
    return k * (l2lo if k >= 0 else l2hi) + Fraction(2 * lo, 1 << F)


def log_lower(x, bits: int = 64) -> Fraction:
    """Rational r <= ln(x), within 2**-bits of it."""
    return _log_bound(Fraction(x), bits, up=False)


def log_upper(x, bits: int = 64) -> Fraction:
    """Rational r >= ln(x), within 2**-bits of it."""
    return _log_bound(Fraction(x), bits, up=True)


def log_bounds(x, bits: int = 64) -> tuple[Fraction, Fraction]:
    return log_lower(x, bits), log_upper(x, bits)
