"""Oracle representations of real and complex numbers.

An oracle is a procedure ``n -> q`` returning a rational within ``2**-n`` of
its target.  Constant oracles remember the exact value so consumers can skip
error bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Callable, Optional


@dataclass(frozen=True)
class RealOracle:
    query: Callable[[int], Fraction]
    exact: Optional[Fraction] = None
    name: str = ""

    def __call__(self, n: int) -> Fraction:
        if self.exact is not None:
            return self.exact
        return Fraction(self.query(n))

    def bounds(self, n: int) -> tuple[Fraction, Fraction]:
        """Closed interval certainly containing the target."""
        q = self(n)
        if self.exact is not None:
            return q, q
        eps = Fraction(1, 1 << n)
        return q - eps, q + eps


@dataclass(frozen=True)
class ComplexOracle:
    """Oracle for a point of the plane; ``query(n)`` is within 2**-n in Euclidean distance."""

    query: Callable[[int], tuple[Fraction, Fraction]]
    exact: Optional[tuple[Fraction, Fraction]] = None
    name: str = ""

    def __call__(self, n: int) -> tuple[Fraction, Fraction]:
        if self.exact is not None:
            return self.exact
        x, y = self.query(n)
        return Fraction(x), Fraction(y)

    @classmethod
    def from_reals(cls, re: RealOracle, im: RealOracle | None = None) -> "ComplexOracle":
        im = im if im is not None else oracle_from_rational(0)
        if re.exact is not None and im.exact is not None:
            return complex_from_rational(re.exact, im.exact)
        # two coordinates at precision n+1 give Euclidean error < sqrt(2) 2^-(n+1) < 2^-n
        return cls(lambda n: (re(n + 1), im(n + 1)), name=f"{re.name}+i{im.name}")

    def conj(self) -> "ComplexOracle":
        if self.exact is not None:
            return complex_from_rational(self.exact[0], -self.exact[1])
        return ComplexOracle(lambda n: (self(n)[0], -self(n)[1]), name=f"conj({self.name})")


def oracle_from_rational(q) -> RealOracle:
    q = Fraction(q)
    return RealOracle(lambda n: q, exact=q, name=str(q))


def complex_from_rational(x, y=0) -> ComplexOracle:
    x, y = Fraction(x), Fraction(y)
    return ComplexOracle(lambda n: (x, y), exact=(x, y), name=f"{x}+{y}i")


def sqrt_oracle(q) -> RealOracle:
    """Oracle for sqrt(q), q >= 0 rational.  Exact when q is a rational square."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative argument")
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return oracle_from_rational(Fraction(rn, rd))

    def query(n: int) -> Fraction:
        k = n + 1
        scaled = q * (1 << (2 * k))
        return Fraction(isqrt(scaled.numerator // scaled.denominator), 1 << k)

    return RealOracle(query, name=f"sqrt({q})")


def affine_oracle(x: RealOracle, a, b) -> RealOracle:
    """Oracle for a*x + b with rational a, b."""
    a, b = Fraction(a), Fraction(b)
    if x.exact is not None:
        return oracle_from_rational(a * x.exact + b)
    if a == 0:
        return oracle_from_rational(b)
    extra = max(0, abs(a).numerator.bit_length() - abs(a).denominator.bit_length() + 1)
    return RealOracle(lambda n: a * x(n + extra) + b, name=f"{a}*{x.name}+{b}")


def golden_conjugate() -> RealOracle:
    """(sqrt(5) - 1) / 2, the golden rotation number."""
    return RealOracle(affine_oracle(sqrt_oracle(5), Fraction(1, 2), Fraction(-1, 2)).query,
                      name="golden")


def e_oracle() -> RealOracle:
    def query(n: int) -> Fraction:
        # sum_{k<K} 1/k! with tail < 2/K!
        s, term, k = Fraction(0), Fraction(1), 0
        while True:
            s += term
            k += 1
            term /= k
            if 2 * term < Fraction(1, 1 << (n + 1)):
                return s
    return RealOracle(query, name="e")


def pi_oracle() -> RealOracle:
    """Machin's formula with alternating-series error control."""

    def atan_inv(m: int, eps: Fraction) -> Fraction:
        s, k, sign = Fraction(0), 0, 1
        while True:
            t = Fraction(1, (2 * k + 1) * m ** (2 * k + 1))
            if t < eps:
                return s
            s += sign * t
            sign, k = -sign, k + 1

    def query(n: int) -> Fraction:
        eps = Fraction(1, 1 << (n + 6))
        return 16 * atan_inv(5, eps) - 4 * atan_inv(239, eps)

    return RealOracle(query, name="pi")


def continued_fraction_oracle(prefix, tail: RealOracle | None = None) -> RealOracle:
    """Oracle for [0; a_1, ..., a_k, tail], where ``tail`` > 1 (golden ratio by default).

    Used to build rotation numbers with prescribed partial quotients.
    """
    prefix = [int(a) for a in prefix]
    if any(a < 1 for a in prefix):
        raise ValueError("partial quotients must be positive")
    tail = tail if tail is not None else affine_oracle(sqrt_oracle(5), Fraction(1, 2), Fraction(1, 2))
    # convergents of [0; a_1..a_k]
    p_prev, p = 1, 0
    q_prev, q = 0, 1
    for a in prefix:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    # theta = (p t + p_prev) / (q t + q_prev); |d theta / dt| <= 1/q^2 for t >= 1
    if tail.exact is not None:
        t = tail.exact
        return oracle_from_rational((p * t + p_prev) / (q * t + q_prev))

    def query(n: int) -> Fraction:
        t = tail(n + 1)
        return (p * t + p_prev) / (q * t + q_prev)

    return RealOracle(query, name=f"cf{prefix[:3]}..")


NAMED_REAL = {
    "golden": golden_conjugate,
    "sqrt2": lambda: sqrt_oracle(2),
    "e": e_oracle,
    "pi": pi_oracle,
}


def named_real(name: str) -> RealOracle:
    try:
        return NAMED_REAL[name]()
    except KeyError:
        raise ValueError(f"unknown oracle {name!r}; known: {sorted(NAMED_REAL)}") from None


def check_consistency(oracle, n_max: int = 30) -> bool:
    """True if ``|q(n) - q(m)| < 2^-n + 2^-m`` for all n, m <= n_max."""
    values = [oracle(n) for n in range(n_max + 1)]
    for n, a in enumerate(values):
        for m, b in enumerate(values):
            bound = Fraction(1, 1 << n) + Fraction(1, 1 << m)
            if isinstance(a, tuple):
                d2 = (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2
                if d2 >= bound * bound:
                    return False
            elif abs(a - b) >= bound:
                return False
    return True
