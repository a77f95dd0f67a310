import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compdyn.core import named_real
from compdyn.errors import ZeroHits
from compdyn.measures import CIRCLE, discretize_reference, wasserstein1
from compdyn.metric import (
    Doubling,
    Rotation,
    TableMap,
    birkhoff_measure,
    entropy_from_separation,
    katok_brin_estimate,
    make_map,
    pseudo_random_point,
    separated_count,
    verify_separated,
)


# ---------------------------------------------------------------- oracles

def greedy_doubling_oracle(g, n, eps):
    """Greedy separated subset of {j / 2^g} for x -> 2x mod 1, in integer units."""
    M = 1 << g
    e = eps * M
    orbits = [[(j << k) % M for k in range(n)] for j in range(M)]
    chosen = []
    for j in range(M):
        oj = orbits[j]
        ok = True
        for i in chosen:
            oi = orbits[i]
            if max(min((a - b) % M, (b - a) % M) for a, b in zip(oi, oj)) < e:
                ok = False
                break
        if ok:
            chosen.append(j)
    return len(chosen)


def digit_orbit(x0: Fraction, N: int) -> np.ndarray:
    """Doubling orbit read from the binary expansion of x0 as a digit string."""
    L = N + 53
    # first L binary digits of x0 in [0, 1), in one integer division
    s = bin((x0.numerator << L) // x0.denominator)[2:].zfill(L)[-L:]
    return np.array([int(s[t:t + 53], 2) / 2.0 ** 53 for t in range(N)])


def direct_hits(pts, eps, n, T):
    win = np.lib.stride_tricks.sliding_window_view(pts[1:], n)[:T]
    d = np.abs(win - pts[:n][None, :]) % 1.0
    d = np.minimum(d, 1.0 - d)
    return int(np.sum(d.max(axis=1) < eps))


# ---------------------------------------------------------------- maps and orbits

def test_maps_stay_in_unit_interval():
    xs = np.linspace(0, 1, 1001, endpoint=False)
    for f in (Doubling(), Rotation(Fraction(3, 7)), Rotation(named_real("golden")),
              TableMap([0, Fraction(3, 4), Fraction(5, 4), 2])):
        y = f.apply(xs)
        assert np.all((0 <= y) & (y < 1))


def test_orbit_consistency():
    x0 = pseudo_random_point(5, 200)
    orb = Doubling().orbit(x0, 300)
    exact = Doubling().exact_orbit(x0, 300)
    assert np.max(np.abs(orb.points - np.array([float(v) for v in exact]))) <= orb.error
    assert np.max(np.abs(orb.points - digit_orbit(x0, 300))) <= orb.error
    rot = Rotation(Fraction(2, 7)).orbit(Fraction(1, 5), 50)
    ex = Rotation(Fraction(2, 7)).exact_orbit(Fraction(1, 5), 50)
    assert np.max(np.abs(rot.points - np.array([float(v) for v in ex]))) <= rot.error
    assert orb.to_csv().splitlines()[0] == "index,point"


def test_pseudo_random_point_is_not_dyadic():
    for seed in range(5):
        x = pseudo_random_point(seed)
        assert 0 < x < 1 and x.denominator % 3 == 0
    assert pseudo_random_point(4) == pseudo_random_point(4)


def test_make_map():
    assert isinstance(make_map("doubling"), Doubling)
    assert make_map("rotation", Fraction(1, 3)).exact(Fraction(1, 2)) == Fraction(5, 6)
    with pytest.raises(ValueError):
        make_map("tent")


# ---------------------------------------------------------------- separated sets

def test_separated_examples():
    r = separated_count(Doubling(), 1, Fraction(1, 2), 10)
    assert r.count == 2 and set(r.witnesses) == {Fraction(0), Fraction(1, 2)}
    assert separated_count(Doubling(), 4, Fraction(1, 2), 10).count == 16
    for n in (1, 3, 6):
        assert separated_count(Rotation(0), n, Fraction(1, 2), 10).count == 2


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 7, 8])
def test_separated_matches_integer_oracle(n):
    eps = Fraction(1, 4)
    oracle = greedy_doubling_oracle(12, n, eps)
    assert separated_count(Doubling(), n, eps, 12).count == oracle
    if n <= 5:
        assert separated_count(Doubling(), n, eps, 12, method="generic").count == oracle


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.sampled_from([Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(3, 16)]),
       st.sampled_from(["doubling", "rot", "table"]))
def test_witnesses_are_separated(n, eps, kind):
    f = {"doubling": Doubling(), "rot": Rotation(Fraction(1, 3)),
         "table": TableMap([0, Fraction(1, 3), Fraction(3, 2), 2])}[kind]
    r = separated_count(f, n, eps, 9)
    assert r.count == len(r.witnesses) >= 1
    assert verify_separated(f, r.witnesses, n, eps)
    assert r.to_json()["estimator_not_certificate"] is True


def test_separated_monotone():
    f = Doubling()
    for n in range(1, 7):
        counts = [separated_count(f, n, e, 11).count for e in (Fraction(1, 16), Fraction(1, 8), Fraction(1, 4))]
        assert counts[0] >= counts[1] >= counts[2]
    for e in (Fraction(1, 8), Fraction(1, 4)):
        counts = [separated_count(f, n, e, 11).count for n in range(1, 8)]
        assert all(a <= b for a, b in zip(counts, counts[1:]))
    table = TableMap([0, Fraction(1, 3), Fraction(3, 2), 2])
    counts = [separated_count(table, n, Fraction(1, 4), 10).count for n in range(1, 6)]
    assert all(a <= b for a, b in zip(counts, counts[1:]))


def test_grid_precondition():
    with pytest.raises(ValueError):
        separated_count(Doubling(), 2, Fraction(1, 16), 5)


def test_entropy_from_separation_sequence():
    r = entropy_from_separation(Doubling(), Fraction(1, 4), 10, 14)
    assert all(a >= b for a, b in zip(r.h, r.h[1:]))
    for k in range(len(r.h)):
        assert r.h[k] == min(math.log(c) / (j + 1) for j, c in enumerate(r.counts[:k + 1]))
    r0 = entropy_from_separation(Rotation(0), Fraction(1, 4), 12, 10)
    assert len(set(r0.counts)) == 1 and r0.h[-1] < 0.2


# ---------------------------------------------------------------- Birkhoff measures

def test_birkhoff_examples():
    mu = birkhoff_measure(Doubling(), Fraction(1, 3), 2)
    assert [p[0] for p in mu.points] == [Fraction(1, 3), Fraction(2, 3)]
    assert mu.weights == [Fraction(1, 2)] * 2
    mu = birkhoff_measure(Doubling(), Fraction(1, 7), 3)
    assert sorted(p[0] for p in mu.points) == [Fraction(1, 7), Fraction(2, 7), Fraction(4, 7)]


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 300), st.integers(0, 1000))
def test_birkhoff_weights_sum_to_one(N, seed):
    mu = birkhoff_measure(Doubling(), pseudo_random_point(seed, 64), N)
    assert sum(mu.weights) == 1
    assert mu.metric == CIRCLE


def test_birkhoff_equidistributes():
    mu = birkhoff_measure(Doubling(), pseudo_random_point(1, 100_064), 100_000)
    leb = discretize_reference("lebesgue-interval", 1000)
    assert float(wasserstein1(mu, leb, CIRCLE).cost) < 0.01


# ---------------------------------------------------------------- Katok-Brin

@pytest.fixture(scope="module")
def doubling_orbit():
    x0 = pseudo_random_point(0, 1_000_000 + 64)
    return Doubling().orbit(x0, 1_000_000)


def test_katok_doubling(doubling_orbit):
    est = katok_brin_estimate(doubling_orbit, Fraction(1, 64), 12)
    assert 0.59 <= est.value <= 0.79
    assert est.hits_n <= est.hits_m


def test_katok_matches_digit_oracle():
    x0 = pseudo_random_point(2, 200_064)
    N, n, eps = 200_000, 10, 1 / 64
    orb = Doubling().orbit(x0, N)
    pts = digit_orbit(x0, N)
    assert np.max(np.abs(orb.points - pts)) <= orb.error
    T = N - n
    hn, hm = direct_hits(pts, eps, n, T), direct_hits(pts, eps, n // 2, T)
    est = katok_brin_estimate(orb, eps, n)
    assert (est.hits_n, est.hits_m) == (hn, hm)
    assert est.value == pytest.approx((math.log(hm) - math.log(hn)) / (n - n // 2), abs=1e-12)
    direct = katok_brin_estimate(orb, eps, n, method="direct")
    assert direct.value == pytest.approx(-math.log(hn / T) / n, abs=1e-12)


def test_katok_rotation_and_periodic():
    orb = Rotation(named_real("golden")).orbit(pseudo_random_point(0), 1_000_000)
    assert katok_brin_estimate(orb, Fraction(1, 64), 12).value < 0.1
    per = Doubling().orbit(Fraction(1, 3), 2000)
    assert katok_brin_estimate(per, Fraction(1, 8), 12).value == 0


def test_katok_zero_hits():
    orb = Doubling().orbit(pseudo_random_point(3), 200)
    with pytest.raises(ZeroHits) as info:
        katok_brin_estimate(orb, 2.0 ** -30, 12)
    assert info.value.bound == pytest.approx(math.log(188) / 12)


def test_variational_sanity(doubling_orbit):
    kb = katok_brin_estimate(doubling_orbit, Fraction(1, 64), 12).value
    h = entropy_from_separation(Doubling(), Fraction(1, 4), 14, 18).h[-1]
    assert kb <= h + 0.1
    assert abs(kb - math.log(2)) < 0.1 and abs(h - math.log(2)) < 0.1
