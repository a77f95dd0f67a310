"""Exact dyadic rationals and outward-rounded interval / box arithmetic.

A :class:`Dyadic` is ``mantissa * 2**exponent`` with the mantissa kept odd
(or zero).  Sums, differences and products are exact.  Interval and box
operations take a ``prec`` argument: the number of significant mantissa bits
kept after each operation, rounding the lower endpoint down and the upper
endpoint up.  ``prec=None`` means no rounding at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

DEFAULT_PREC = 53


class Dyadic:
    __slots__ = ("mantissa", "exponent")

    def __init__(self, mantissa: int = 0, exponent: int = 0):
        mantissa = int(mantissa)
        exponent = int(exponent)
        if mantissa == 0:
            exponent = 0
        else:
            tz = (mantissa & -mantissa).bit_length() - 1
            if tz:
                mantissa >>= tz
                exponent += tz
        object.__setattr__(self, "mantissa", mantissa)
        object.__setattr__(self, "exponent", exponent)

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic is immutable")

    # construction -------------------------------------------------------

    @classmethod
    def coerce(cls, value) -> "Dyadic":
        if isinstance(value, Dyadic):
            return value
        if isinstance(value, int):
            return cls(value, 0)
        if isinstance(value, float):
            return cls.from_fraction_exact(Fraction(value))
        if isinstance(value, Rational):
            return cls.from_fraction_exact(Fraction(value))
        raise TypeError(f"cannot convert {type(value).__name__} to Dyadic")

    @classmethod
    def from_fraction_exact(cls, q) -> "Dyadic":
        q = Fraction(q)
        den = q.denominator
        if den & (den - 1):
            raise ValueError(f"{q} is not a dyadic rational")
        return cls(q.numerator, -(den.bit_length() - 1))

    @classmethod
    def floor(cls, q, prec: int) -> "Dyadic":
        """Largest multiple of ``2**-prec`` that is <= q."""
        q = Fraction(q)
        return cls((q.numerator << prec) // q.denominator, -prec) if prec >= 0 else \
            cls((q.numerator // (q.denominator << -prec)), -prec)

    @classmethod
    def ceil(cls, q, prec: int) -> "Dyadic":
        """Smallest multiple of ``2**-prec`` that is >= q."""
        return -cls.floor(-Fraction(q), prec)

    # conversion ---------------------------------------------------------

    def to_fraction(self) -> Fraction:
        if self.exponent >= 0:
            return Fraction(self.mantissa << self.exponent)
        return Fraction(self.mantissa, 1 << -self.exponent)

    def __float__(self) -> float:
        return float(self.to_fraction())

    def __repr__(self) -> str:
        return f"Dyadic({self.mantissa}, {self.exponent})"

    def __str__(self) -> str:
        return str(self.to_fraction())

    # arithmetic ---------------------------------------------------------

    def _align(self, other: "Dyadic"):
        e = min(self.exponent, other.exponent)
        return self.mantissa << (self.exponent - e), other.mantissa << (other.exponent - e), e

    def __add__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        a, b, e = self._align(other)
        return Dyadic(a + b, e)

    __radd__ = __add__

    def __sub__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        a, b, e = self._align(other)
        return Dyadic(a - b, e)

    def __rsub__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        return Dyadic(self.mantissa * other.mantissa, self.exponent + other.exponent)

    __rmul__ = __mul__

    def __neg__(self):
        return Dyadic(-self.mantissa, self.exponent)

    def __abs__(self):
        return Dyadic(abs(self.mantissa), self.exponent)

    def scale2(self, k: int) -> "Dyadic":
        """Multiply by ``2**k`` (exact)."""
        return Dyadic(self.mantissa, self.exponent + k)

    def round(self, prec: int | None, up: bool) -> "Dyadic":
        """Keep at most ``prec`` significant bits, rounding toward +inf if ``up``."""
        if prec is None:
            return self
        n = abs(self.mantissa).bit_length()
        if n <= prec:
            return self
        shift = n - prec
        q = self.mantissa >> shift
        if up and (q << shift) != self.mantissa:
            q += 1
        return Dyadic(q, self.exponent + shift)

    # comparison ---------------------------------------------------------

    def _cmp(self, other) -> int:
        if not isinstance(other, Dyadic):
            other = Fraction(other)
            f = self.to_fraction()
            return (f > other) - (f < other)
        a, b, _ = self._align(other)
        return (a > b) - (a < b)

    def __eq__(self, other):
        try:
            return self._cmp(other) == 0
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(self.to_fraction())

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def sign(self) -> int:
        return (self.mantissa > 0) - (self.mantissa < 0)


def _maybe(x):
    try:
        return Dyadic.coerce(x)
    except (TypeError, ValueError):
        return NotImplemented


ZERO = Dyadic(0)
ONE = Dyadic(1)


def dyadic_arith(a: Dyadic, b: Dyadic, op: str) -> Dyadic:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


@dataclass(frozen=True)
class DInterval:
    """Closed interval with dyadic endpoints."""

    lo: Dyadic
    hi: Dyadic

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> "DInterval":
        d = Dyadic.coerce(x)
        return cls(d, d)

    @classmethod
    def enclose(cls, lo, hi=None, prec: int = DEFAULT_PREC + 11) -> "DInterval":
        """Smallest interval with ``2**-prec``-grid endpoints containing [lo, hi]."""
        hi = lo if hi is None else hi
        lo, hi = Fraction(lo), Fraction(hi)
        if lo.denominator & (lo.denominator - 1) == 0 and hi.denominator & (hi.denominator - 1) == 0:
            return cls(Dyadic.from_fraction_exact(lo), Dyadic.from_fraction_exact(hi))
        return cls(Dyadic.floor(lo, prec), Dyadic.ceil(hi, prec))

    def contains(self, x) -> bool:
        x = Fraction(x) if not isinstance(x, Dyadic) else x
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "DInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersects(self, other: "DInterval") -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    @property
    def width(self) -> Dyadic:
        return self.hi - self.lo

    @property
    def mid(self) -> Dyadic:
        return (self.lo + self.hi).scale2(-1)

    @property
    def mag(self) -> Dyadic:
        return max(abs(self.lo), abs(self.hi))

    @property
    def mig(self) -> Dyadic:
        if self.lo <= 0 <= self.hi:
            return ZERO
        return min(abs(self.lo), abs(self.hi))

    def is_point(self) -> bool:
        return self.lo == self.hi

    def _out(self, lo: Dyadic, hi: Dyadic, prec):
        return DInterval(lo.round(prec, up=False), hi.round(prec, up=True))

    def add(self, other: "DInterval", prec=DEFAULT_PREC) -> "DInterval":
        return self._out(self.lo + other.lo, self.hi + other.hi, prec)

    def sub(self, other: "DInterval", prec=DEFAULT_PREC) -> "DInterval":
        return self._out(self.lo - other.hi, self.hi - other.lo, prec)

    def neg(self) -> "DInterval":
        return DInterval(-self.hi, -self.lo)

    def mul(self, other: "DInterval", prec=DEFAULT_PREC) -> "DInterval":
        p = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return self._out(min(p), max(p), prec)

    def sqr(self, prec=DEFAULT_PREC) -> "DInterval":
        a, b = self.lo * self.lo, self.hi * self.hi
        if self.lo <= 0 <= self.hi:
            return self._out(ZERO, max(a, b), prec)
        return self._out(min(a, b), max(a, b), prec)

    def scale2(self, k: int) -> "DInterval":
        return DInterval(self.lo.scale2(k), self.hi.scale2(k))

    def hull(self, other: "DInterval") -> "DInterval":
        return DInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def __add__(self, other):
        return self.add(other)

    def __sub__(self, other):
        return self.sub(other)

    def __mul__(self, other):
        return self.mul(other)

    def __neg__(self):
        return self.neg()

    def __repr__(self):
        return f"[{self.lo}, {self.hi}]"


@dataclass(frozen=True)
class ComplexBox:
    re: DInterval
    im: DInterval

    @classmethod
    def point(cls, x, y=0) -> "ComplexBox":
        if isinstance(x, complex):
            x, y = x.real, x.imag
        return cls(DInterval.point(x), DInterval.point(y))

    @classmethod
    def from_bounds(cls, xlo, xhi, ylo, yhi) -> "ComplexBox":
        return cls(DInterval(Dyadic.coerce(xlo), Dyadic.coerce(xhi)),
                   DInterval(Dyadic.coerce(ylo), Dyadic.coerce(yhi)))

    @classmethod
    def around(cls, x, y, radius) -> "ComplexBox":
        """Square of half-width ``radius`` centred at the dyadic point (x, y)."""
        x, y, r = Dyadic.coerce(x), Dyadic.coerce(y), Dyadic.coerce(radius)
        return cls(DInterval(x - r, x + r), DInterval(y - r, y + r))

    @classmethod
    def enclose(cls, x, y=0, err=0, prec: int = DEFAULT_PREC + 11) -> "ComplexBox":
        """Box containing every point within distance ``err`` of the rational (x, y)."""
        x, y, err = Fraction(x), Fraction(y), Fraction(err)
        return cls(DInterval.enclose(x - err, x + err, prec), DInterval.enclose(y - err, y + err, prec))

    def add(self, other: "ComplexBox", prec=DEFAULT_PREC) -> "ComplexBox":
        return ComplexBox(self.re.add(other.re, prec), self.im.add(other.im, prec))

    def sub(self, other: "ComplexBox", prec=DEFAULT_PREC) -> "ComplexBox":
        return ComplexBox(self.re.sub(other.re, prec), self.im.sub(other.im, prec))

    def mul(self, other: "ComplexBox", prec=DEFAULT_PREC) -> "ComplexBox":
        if other.is_point() and other.im.lo == 0 and other.re.lo == 1:
            return self
        rr = self.re.mul(other.re, None)
        ii = self.im.mul(other.im, None)
        ri = self.re.mul(other.im, None)
        ir = self.im.mul(other.re, None)
        return ComplexBox(rr.sub(ii, prec), ri.add(ir, prec))

    def sqr(self, prec=DEFAULT_PREC) -> "ComplexBox":
        re = self.re.sqr(None).sub(self.im.sqr(None), prec)
        im = self.re.mul(self.im, None).scale2(1)
        return ComplexBox(re, DInterval(im.lo.round(prec, False), im.hi.round(prec, True)))

    def scale_int(self, k: int, prec=DEFAULT_PREC) -> "ComplexBox":
        return self.mul(ComplexBox.point(k), prec)

    def neg(self) -> "ComplexBox":
        return ComplexBox(self.re.neg(), self.im.neg())

    def is_point(self) -> bool:
        return self.re.is_point() and self.im.is_point()

    def contains(self, x, y=0) -> bool:
        if isinstance(x, complex):
            x, y = Fraction(x.real), Fraction(x.imag)
        return self.re.contains(x) and self.im.contains(y)

    def contains_box(self, other: "ComplexBox") -> bool:
        return self.re.contains_interval(other.re) and self.im.contains_interval(other.im)

    def intersects(self, other: "ComplexBox") -> bool:
        return self.re.intersects(other.re) and self.im.intersects(other.im)

    def hull(self, other: "ComplexBox") -> "ComplexBox":
        return ComplexBox(self.re.hull(other.re), self.im.hull(other.im))

    @property
    def mid(self) -> tuple[Dyadic, Dyadic]:
        return self.re.mid, self.im.mid

    def mid_complex(self) -> complex:
        return complex(float(self.re.mid), float(self.im.mid))

    def abs2_bounds(self) -> tuple[Fraction, Fraction]:
        """Exact bounds on |z|^2 over the box."""
        lo = self.re.mig * self.re.mig + self.im.mig * self.im.mig
        hi = self.re.mag * self.re.mag + self.im.mag * self.im.mag
        return lo.to_fraction(), hi.to_fraction()

    def radius_bound(self) -> Fraction:
        """Upper bound on the distance from the midpoint to any point of the box."""
        hw = self.re.width.scale2(-1).to_fraction()
        hh = self.im.width.scale2(-1).to_fraction()
        return sqrt_upper(hw * hw + hh * hh)

    def __add__(self, other):
        return self.add(other)

    def __sub__(self, other):
        return self.sub(other)

    def __mul__(self, other):
        return self.mul(other)

    def __repr__(self):
        return f"ComplexBox({self.re!r} + i{self.im!r})"


def box_image(f_coeffs, z: ComplexBox, prec=DEFAULT_PREC) -> ComplexBox:
    """Enclosure of ``{f(w) : w in z}`` by Horner evaluation.

    ``f_coeffs`` lists the coefficient boxes from the leading one down to the
    constant term.  When the leading coefficient is exactly 1 and the next one
    exactly 0, the first product is evaluated as a square, which is tighter
    than a general box product.
    """
    coeffs = list(f_coeffs)
    if not coeffs:
        raise ValueError("empty coefficient list")
    one = ComplexBox.point(1)
    zero = ComplexBox.point(0)
    acc = coeffs[0]
    rest = coeffs[1:]
    if acc == one and rest:
        acc = z.add(rest[0], prec)
        rest = rest[1:]
        if coeffs[1] == zero and rest:
            acc = z.sqr(prec).add(rest[0], prec)
            rest = rest[1:]
    for c in rest:
        acc = acc.mul(z, prec).add(c, prec)
    return acc


def sqrt_upper(q: Fraction, bits: int = 64) -> Fraction:
    """Dyadic upper bound on sqrt(q), exact whenever the root is a 2**-bits multiple."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative argument")
    scaled = q * (1 << (2 * bits))
    n = -(-scaled.numerator // scaled.denominator)
    r = _isqrt_ceil(n)
    return Fraction(r, 1 << bits)


def sqrt_lower(q: Fraction, bits: int = 64) -> Fraction:
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative argument")
    scaled = q * (1 << (2 * bits))
    n = scaled.numerator // scaled.denominator
    from math import isqrt
    return Fraction(isqrt(n), 1 << bits)


def _isqrt_ceil(n: int) -> int:
    from math import isqrt
    r = isqrt(n)
    return r if r * r == n else r + 1
