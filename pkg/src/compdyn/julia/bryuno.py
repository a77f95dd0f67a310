"""Continued-fraction denominators of rotation numbers and Bryuno partial sums."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..core.logbounds import log_bounds
from ..core.oracles import RealOracle, oracle_from_rational
from ..errors import PrecisionExhausted, RationalDetected

START_BITS = 64
MAX_BITS = 1 << 14


def _floor(q: Fraction) -> int:
    return q.numerator // q.denominator


def _cf_exact(x: Fraction, m: int) -> list[int]:
    """First m partial quotients a_1.. of x in (0, 1); RationalDetected if it terminates first."""
    out = []
    orig = x
    while len(out) < m:
        if x == 0:
            raise RationalDetected(orig)
        y = 1 / x
        a = _floor(y)
        out.append(a)
        x = y - a
    return out


def _cf_interval(lo: Fraction, hi: Fraction, m: int):
    """Partial quotients shared by every point of [lo, hi]; stops at the first ambiguous one.

    Returns (quotients, candidate) where ``candidate`` is the rational inside the
    enclosure that blocks the next quotient (None when all m were resolved).
    """
    out = []
    while len(out) < m:
        if lo <= 0:
            return out, _convergent(out)
        a_hi = _floor(1 / hi)     # 1/x is decreasing
        inv_lo = 1 / lo
        a_lo = _floor(inv_lo)
        if a_hi != a_lo:
            # the remainder 1/a_lo lies inside: theta may be [0; a_1, .., a_k, a_lo]
            return out, _convergent(out + [a_lo])
        out.append(a_hi)
        lo, hi = 1 / hi - a_hi, inv_lo - a_lo
    return out, None


def partial_quotients(theta: RealOracle, m: int, max_bits: int = MAX_BITS) -> list[int]:
    """a_1..a_m of theta in (0, 1), each validated against the oracle error.

    Precision doubles from 64 bits until the enclosure [q - 2^-P, q + 2^-P]
    yields m common quotients.  If at ``max_bits`` the obstruction is a rational
    with denominator below 2^(P/4), RationalDetected is raised; otherwise
    PrecisionExhausted.
    """
    if theta.exact is not None:
        x = theta.exact
        if not 0 < x < 1:
            raise ValueError("theta must lie in (0, 1)")
        return _cf_exact(x, m)
    bits = START_BITS
    while True:
        q = theta(bits)
        e = Fraction(1, 1 << bits)
        lo, hi = max(q - e, Fraction(0)), min(q + e, Fraction(1))
        quot, cand = _cf_interval(lo, hi, m)
        if cand is None:
            return quot
        if bits >= max_bits:
            p_, q_ = cand
            if q_.bit_length() <= bits // 4:
                raise RationalDetected(Fraction(p_, q_))
            raise PrecisionExhausted(f"partial quotient {len(quot) + 1} not resolved at {bits} bits")
        bits *= 2


def _convergent(quot: list[int]) -> tuple[int, int]:
    p_prev, p, q_prev, q = 1, 0, 0, 1
    for a in quot:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    return p, q


def denominators(quot: list[int]) -> list[int]:
    """q_0 = 1, q_1 = a_1, q_{n+1} = a_{n+1} q_n + q_{n-1}."""
    qs = [1]
    q_prev = 0
    for a in quot:
        qs.append(a * qs[-1] + q_prev)
        q_prev = qs[-2]
    return qs


@dataclass(frozen=True)
class BryunoSums:
    quotients: tuple
    denominators: tuple          # q_0 .. q_m
    lower: tuple                 # certified bounds on S_1 .. S_m (natural log)
    upper: tuple

    @property
    def sums(self) -> list[float]:
        return [float((a + b) / 2) for a, b in zip(self.lower, self.upper)]

    def to_json(self) -> dict:
        return {"partial_quotients": list(self.quotients), "denominators": list(self.denominators),
                "partial_sums": self.sums, "lower": [str(x) for x in self.lower],
                "upper": [str(x) for x in self.upper], "log": "natural", "diagnostic_only": True}


def bryuno_partial_sums(theta, m: int = 10, bits: int = 64, max_bits: int = MAX_BITS) -> BryunoSums:
    """S_j = sum_{n<j} log(q_{n+1}) / q_n for j = 1..m, with certified enclosures.

    A finite sum says nothing about convergence of the series; these numbers
    are a diagnostic, never a verdict on linearizability.
    """
    if not isinstance(theta, RealOracle):
        theta = oracle_from_rational(theta)
    if m < 1:
        raise ValueError("need at least one term")
    quot = partial_quotients(theta, m, max_bits)
    qs = denominators(quot)
    lo, hi = Fraction(0), Fraction(0)
    lows, highs = [], []
    for n in range(m):
        l, h = log_bounds(Fraction(qs[n + 1]), bits)
        lo += l / qs[n]
        hi += h / qs[n]
        lows.append(lo)
        highs.append(hi)
    return BryunoSums(tuple(quot), tuple(qs), tuple(lows), tuple(highs))
