import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compdyn.core import (
    ComplexBox,
    DInterval,
    Dyadic,
    box_image,
    check_consistency,
    complex_from_rational,
    dyadic_arith,
    log_bounds,
    ln2_bounds,
    named_real,
    oracle_from_rational,
    sqrt_oracle,
)
from compdyn.core.oracles import affine_oracle, continued_fraction_oracle

dyadics = st.builds(Dyadic, st.integers(-(1 << 80), 1 << 80), st.integers(-70, 70))


def test_dyadic_examples():
    half = Dyadic(1, -1)
    assert dyadic_arith(half, half, "add") == Dyadic(1, 0)
    assert dyadic_arith(Dyadic(3, -2), Dyadic(0, 0), "mul") == Dyadic(0)
    r = dyadic_arith(Dyadic(5, -3), Dyadic(1, -3), "sub")
    assert (r.mantissa, r.exponent) == (1, -1)
    with pytest.raises(ValueError):
        dyadic_arith(half, half, "div")


@given(dyadics)
def test_canonical_form(a):
    assert a.mantissa == 0 and a.exponent == 0 or a.mantissa % 2 == 1


@given(dyadics, dyadics, st.sampled_from(["add", "sub", "mul"]))
def test_dyadic_matches_fractions(a, b, op):
    fa, fb = a.to_fraction(), b.to_fraction()
    expect = {"add": fa + fb, "sub": fa - fb, "mul": fa * fb}[op]
    r = dyadic_arith(a, b, op)
    assert r.to_fraction() == expect
    assert r.mantissa % 2 == 1 or r.mantissa == 0


def test_dyadic_bulk_against_fractions():
    rng = random.Random(7)
    for _ in range(10_000):
        a = Dyadic(rng.randint(-2 ** 60, 2 ** 60), rng.randint(-60, 60))
        b = Dyadic(rng.randint(-2 ** 60, 2 ** 60), rng.randint(-60, 60))
        op = rng.choice(["add", "sub", "mul"])
        fa, fb = a.to_fraction(), b.to_fraction()
        assert dyadic_arith(a, b, op).to_fraction() == {"add": fa + fb, "sub": fa - fb, "mul": fa * fb}[op]
        assert (a < b) == (fa < fb)


@given(dyadics, st.integers(1, 40))
def test_round_brackets(a, prec):
    lo, hi = a.round(prec, False), a.round(prec, True)
    assert lo <= a <= hi
    assert abs(lo.mantissa).bit_length() <= prec and abs(hi.mantissa).bit_length() <= prec


def test_dyadic_rejects_non_dyadic():
    with pytest.raises(ValueError):
        Dyadic.from_fraction_exact(Fraction(1, 3))
    with pytest.raises(AttributeError):
        Dyadic(1).mantissa = 3


def _square_coeffs(c=0):
    return [ComplexBox.point(1), ComplexBox.point(0), ComplexBox.point(c)]


def test_box_image_examples():
    z = box_image(_square_coeffs(), ComplexBox.point(1))
    assert z.contains(1, 0) and z.is_point()
    img = box_image(_square_coeffs(), ComplexBox.from_bounds(-1, 1, 0, 0))
    assert img.contains_box(ComplexBox.from_bounds(0, 1, 0, 0))
    assert ComplexBox.from_bounds(-1, 1, -1, 1).contains_box(img)
    assert box_image(_square_coeffs(-2), ComplexBox.point(0)) == ComplexBox.point(-2)


def _cpoly(coeffs, w):
    acc = (Fraction(0), Fraction(0))
    for cx, cy in coeffs:
        x, y = acc[0] * w[0] - acc[1] * w[1], acc[0] * w[1] + acc[1] * w[0]
        acc = (x + cx, y + cy)
    return acc


def _random_case(rng):
    d = rng.choice([2, 3, 4])
    coeffs = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(0))]
    coeffs += [(Fraction(rng.randint(-64, 64), 32), Fraction(rng.randint(-64, 64), 32)) for _ in range(d - 1)]
    xl = Fraction(rng.randint(-256, 256), 128)
    yl = Fraction(rng.randint(-256, 256), 128)
    wx, wy = Fraction(rng.randint(0, 64), 128), Fraction(rng.randint(0, 64), 128)
    box = ComplexBox.from_bounds(xl, xl + wx, yl, yl + wy)
    return coeffs, box, (xl, yl, wx, wy)


def test_box_image_encloses_point_images():
    rng = random.Random(11)
    for _ in range(500):
        coeffs, box, (xl, yl, wx, wy) = _random_case(rng)
        img = box_image([ComplexBox.point(x, y) for x, y in coeffs], box, prec=30)
        for _ in range(20):
            w = (xl + wx * Fraction(rng.randint(0, 1000), 1000), yl + wy * Fraction(rng.randint(0, 1000), 1000))
            assert img.contains(*_cpoly(coeffs, w))


@settings(max_examples=200)
@given(st.integers(0, 10 ** 6), st.integers(8, 60))
def test_box_image_enclosure_property(seed, prec):
    rng = random.Random(seed)
    coeffs, box, (xl, yl, wx, wy) = _random_case(rng)
    img = box_image([ComplexBox.point(x, y) for x, y in coeffs], box, prec=prec)
    for corner in [(xl, yl), (xl + wx, yl + wy), (xl + wx / 3, yl + wy / 7)]:
        assert img.contains(*_cpoly(coeffs, corner))
    assert img.re.lo <= img.re.hi and img.im.lo <= img.im.hi


def test_interval_ops_enclose():
    a = DInterval.enclose(Fraction(1, 3), Fraction(1, 2), prec=20)
    b = DInterval.enclose(Fraction(-2, 3), Fraction(1, 5), prec=20)
    prod = a.mul(b, prec=10)
    for x in (Fraction(1, 3), Fraction(1, 2)):
        for y in (Fraction(-2, 3), Fraction(1, 5)):
            assert prod.contains(x * y)
    assert a.sqr(8).contains(Fraction(1, 9))


def test_rational_oracle_examples():
    o = oracle_from_rational(Fraction(1, 3))
    assert o(10) == Fraction(1, 3)
    assert all(oracle_from_rational(0)(n) == 0 for n in range(0, 40, 7))
    assert check_consistency(o, 20)


@pytest.mark.parametrize("oracle", [
    sqrt_oracle(2), named_real("golden"), named_real("pi"), named_real("e"),
    affine_oracle(named_real("golden"), -1, 0), continued_fraction_oracle([1, 2, 3]),
])
def test_oracle_consistency(oracle):
    assert check_consistency(oracle, 30)


def test_named_oracles_are_accurate():
    import math

    assert abs(float(named_real("golden")(50)) - (math.sqrt(5) - 1) / 2) < 1e-15
    assert abs(float(named_real("pi")(50)) - math.pi) < 1e-15
    assert abs(float(sqrt_oracle(2)(50)) ** 2 - 2) < 1e-14
    with pytest.raises(ValueError):
        named_real("tau")


def test_complex_oracle_consistency():
    assert check_consistency(complex_from_rational(Fraction(1, 3), -2), 20)
    from compdyn.core import ComplexOracle

    z = ComplexOracle.from_reals(sqrt_oracle(2), named_real("golden"))
    assert check_consistency(z, 25)


def test_log_bounds_bracket():
    import math

    for x in [Fraction(2), Fraction(3), Fraction(1, 7), Fraction(10 ** 9 + 7)]:
        lo, hi = log_bounds(x, 60)
        assert lo <= hi and hi - lo < Fraction(1, 1 << 55)
        assert abs(float(lo) - math.log(x)) < 1e-12
    import mpmath

    with mpmath.workprec(300):
        m, e = mpmath.log(2).man_exp
    ln2 = Fraction(m, 1 << -e)
    lo, hi = ln2_bounds(100)
    assert lo <= ln2 <= hi and hi - lo < Fraction(1, 1 << 95)
