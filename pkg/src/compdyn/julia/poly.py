"""Monic complex polynomials given by coefficient oracles."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ..core.dyadic import ComplexBox
from ..core.oracles import ComplexOracle, complex_from_rational
from ..core.dyadic import sqrt_upper

_ESCAPE_QUERY = 8


@dataclass(frozen=True)
class PolySpec:
    """f(z) = z^d + c_{d-1} z^{d-1} + ... + c_0.

    ``coeffs`` lists c_{d-1}, ..., c_0 as ComplexOracles (the z^{d-1} term is
    usually zero but need not be).
    """

    d: int
    coeffs: tuple

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("degree must be at least 2")
        if len(self.coeffs) != self.d:
            raise ValueError(f"expected {self.d} coefficients c_{self.d - 1}..c_0")
        cs = tuple(c if isinstance(c, ComplexOracle) else _as_oracle(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", cs)

    # ------------------------------------------------------------ constructors
    @classmethod
    def from_dict(cls, d: int, terms: dict | None = None) -> "PolySpec":
        """``terms`` maps power -> coefficient (rational, complex, pair or oracle)."""
        terms = terms or {}
        if any(k >= d or k < 0 for k in terms):
            raise ValueError("powers must lie in 0..d-1")
        return cls(d, tuple(_as_oracle(terms.get(k, 0)) for k in range(d - 1, -1, -1)))

    @classmethod
    def quadratic(cls, c=0) -> "PolySpec":
        return cls.from_dict(2, {0: c})

    # ------------------------------------------------------------ queries
    @property
    def is_exact(self) -> bool:
        return all(c.exact is not None for c in self.coeffs)

    def exact_coeffs(self) -> list[tuple[Fraction, Fraction]]:
        """[(re, im)] for c_{d-1}..c_0; requires exact oracles."""
        if not self.is_exact:
            raise ValueError("coefficients are not exact rationals")
        return [c.exact for c in self.coeffs]

    def approx_coeffs(self, n: int = 60) -> list[tuple[Fraction, Fraction]]:
        return [c(n) for c in self.coeffs]

    def complex_coeffs(self) -> np.ndarray:
        """Float coefficients, leading first (numpy.polyval order)."""
        cs = [complex(float(x), float(y)) for x, y in self.approx_coeffs(60)]
        return np.array([1.0 + 0j] + cs)

    def coeff_boxes(self, prec: int = 64) -> list[ComplexBox]:
        """Enclosures of c_{d-1}..c_0: exact points when exact, else oracle value +- 2^-prec."""
        out = []
        for c in self.coeffs:
            if c.exact is not None:
                out.append(ComplexBox.enclose(c.exact[0], c.exact[1], 0, prec + 11))
            else:
                x, y = c(prec)
                out.append(ComplexBox.enclose(x, y, Fraction(1, 1 << prec), prec + 11))
        return out

    def is_monomial(self) -> bool:
        """True for z^d exactly (all lower coefficients are exactly zero)."""
        return self.is_exact and all(c == (0, 0) for c in self.exact_coeffs())

    def has_trace_term(self) -> bool:
        c = self.coeffs[0]
        return not (c.exact is not None and c.exact == (0, 0))

    # ------------------------------------------------------------ evaluation
    def __call__(self, z):
        """Float evaluation (scalar or array)."""
        return np.polyval(self.complex_coeffs(), z)

    def derivative(self, z):
        c = self.complex_coeffs()
        return np.polyval(np.polyder(c), z)

    def eval_exact(self, z: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
        """f(z) in exact Gaussian-rational arithmetic."""
        x, y = Fraction(z[0]), Fraction(z[1])
        ax, ay = Fraction(1), Fraction(0)
        for cx, cy in self.exact_coeffs():
            ax, ay = ax * x - ay * y + cx, ax * y + ay * x + cy
        return ax, ay

    def to_json(self) -> dict:
        out = {"degree": self.d, "coefficients": {}}
        for k, c in zip(range(self.d - 1, -1, -1), self.coeffs):
            if c.exact is not None:
                if c.exact != (0, 0):
                    out["coefficients"][str(k)] = [str(c.exact[0]), str(c.exact[1])]
            else:
                x, y = c(60)
                out["coefficients"][str(k)] = {"name": c.name, "approx": [str(x), str(y)]}
        return out


def _as_oracle(c) -> ComplexOracle:
    if isinstance(c, ComplexOracle):
        return c
    if isinstance(c, complex):
        return complex_from_rational(Fraction(c.real), Fraction(c.imag))
    if isinstance(c, (tuple, list)):
        return complex_from_rational(Fraction(c[0]), Fraction(c[1]))
    return complex_from_rational(Fraction(c), 0)


def abs_upper(x: Fraction, y: Fraction, bits: int = 32) -> Fraction:
    """Upper bound for sqrt(x^2 + y^2), exact when x or y is zero."""
    if y == 0:
        return abs(x)
    if x == 0:
        return abs(y)
    return sqrt_upper(x * x + y * y, bits)


def escape_radius(f: PolySpec) -> Fraction:
    """R = 2 + sum |c_i|, rounded up to a multiple of 2^-8.

    For |z| >= R: |f(z)| >= |z|^{d-1} (|z| - sum |c_i|) >= 2 |z|.
    """
    total = Fraction(2)
    for c in f.coeffs:
        if c.exact is not None:
            total += abs_upper(*c.exact)
        else:
            x, y = c(_ESCAPE_QUERY)
            total += abs_upper(x, y) + Fraction(1, 1 << _ESCAPE_QUERY)
    scale = 1 << _ESCAPE_QUERY
    return Fraction(-((-total.numerator * scale) // total.denominator), scale)


def box_eval(f: PolySpec, z: ComplexBox, coeffs: Optional[Sequence[ComplexBox]] = None,
             prec: int = 53) -> ComplexBox:
    """Enclosure of f over the box z (Horner, squaring first when c_{d-1} = 0)."""
    coeffs = coeffs if coeffs is not None else f.coeff_boxes(prec + 11)
    if not f.has_trace_term():
        acc = z.sqr(prec)
        rest = coeffs[1:]
        acc = acc.add(rest[0], prec)
        for c in rest[1:]:
            acc = acc.mul(z, prec).add(c, prec)
        return acc
    acc = z.add(coeffs[0], prec)
    for c in coeffs[1:]:
        acc = acc.mul(z, prec).add(c, prec)
    return acc


def box_derivative(f: PolySpec, z: ComplexBox, coeffs: Optional[Sequence[ComplexBox]] = None,
                   prec: int = 53) -> ComplexBox:
    """Enclosure of f' over z: d z^{d-1} + sum k c_k z^{k-1}."""
    coeffs = coeffs if coeffs is not None else f.coeff_boxes(prec + 11)
    d = f.d
    acc = ComplexBox.point(d)
    for k, c in zip(range(d - 1, 0, -1), coeffs[:-1]):
        acc = acc.mul(z, prec).add(c.scale_int(k, prec), prec)
    return acc
