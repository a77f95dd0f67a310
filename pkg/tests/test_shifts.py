import itertools
import math
import random
from fractions import Fraction
from functools import lru_cache

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from compdyn.errors import AlphabetMismatch, EmptyShift, InconsistentOracle
from compdyn.shifts import (
    BUDGET_EXHAUSTED,
    CONVERGED,
    ForbiddenSetSFT,
    GeneratingSet,
    LabeledGraph,
    LanguageOracle,
    TransitionMatrix,
    coded_sofic_approximation,
    count_words,
    entropy_coded,
    entropy_sft,
    entropy_sofic,
    entropy_upper_bounds,
    enumerate_language,
    minimal_forbidden_set,
    perron_root_interval,
    presentation_from_json,
    presentation_to_json,
    recode_to_one_step,
    sofic_count_words,
    sofic_determinize,
    zero_entropy_semialgorithm,
)

from oracles import GOLDEN, fib_counts, sgap_counts

LOG_PHI = math.log((1 + math.sqrt(5)) / 2)


# ---------------------------------------------------------------- brute-force oracles

def _admissible(w, forb):
    return not any(w[i:j] in forb for i in range(len(w)) for j in range(i + 1, len(w) + 1))


def brute_sft_language(d, forbidden, n):
    """Words of length n that sit inside arbitrarily long admissible words.

    An admissible word extended by E = d^(K-1) + K symbols on a side repeats a
    (K-1)-block there, so it extends forever on that side.
    """
    forb = {tuple(w) for w in forbidden}
    K = max((len(w) for w in forb), default=1)
    E = d ** max(K - 1, 1) + K
    tail = max(K - 1, 1)

    @lru_cache(maxsize=None)
    def right(block, steps):
        if steps == 0:
            return True
        for s in range(d):
            u = block + (s,)
            if _admissible_suffix(u, forb) and right(u[-tail:], steps - 1):
                return True
        return False

    @lru_cache(maxsize=None)
    def left(block, steps):
        if steps == 0:
            return True
        for s in range(d):
            u = (s,) + block
            if _admissible_prefix(u, forb) and left(u[:tail], steps - 1):
                return True
        return False

    m = max(n, tail)
    words = [w for w in itertools.product(range(d), repeat=m)
             if _admissible(w, forb) and right(w[-tail:], E) and left(w[:tail], E)]
    return {w[:n] for w in words} | {w[m - n:] for w in words} if m > n else set(words)


def _admissible_suffix(u, forb):
    return not any(u[len(u) - L:] in forb for L in range(1, len(u) + 1))


def _admissible_prefix(u, forb):
    return not any(u[:L] in forb for L in range(1, len(u) + 1))


def brute_matrix_count(A, n):
    """Vertex sequences of length n whose ends extend k steps backward / forward."""
    M = np.array(A, dtype=object)
    k = len(A)
    P = np.linalg.matrix_power(np.array(A, dtype=np.int64), k)
    fwd = P.sum(axis=1) > 0
    bwd = P.sum(axis=0) > 0
    total = 0
    stack = [(v, 1) for v in range(k) if bwd[v]]
    while stack:
        v, L = stack.pop()
        if L == n:
            total += int(fwd[v])
            continue
        stack.extend((j, L + 1) for j in range(k) if M[v][j])
    return total


def _charpoly(A):
    return sympy.Matrix(A).charpoly().as_expr()


def spectral_radius_bracket(A, bits=50):
    """Largest real root of the characteristic polynomial by exact root counting."""
    x = sympy.symbols("lambda")
    p = sympy.Poly(sympy.Matrix(A).charpoly(x).as_expr(), x)
    hi = Fraction(len(A) * max(1, max(max(r) for r in A)) + 1)
    lo = Fraction(0)
    if p.count_roots(sympy.Rational(0), sympy.Rational(hi.numerator, hi.denominator)) == 0:
        return Fraction(0), Fraction(0)
    for _ in range(bits):
        mid = (lo + hi) / 2
        if p.count_roots(sympy.Rational(mid.numerator, mid.denominator), sympy.Rational(hi.numerator, hi.denominator)):
            lo = mid
        else:
            hi = mid
    return lo, hi


# ---------------------------------------------------------------- minimal forbidden set / recoding

def test_minimal_forbidden_set_examples():
    assert minimal_forbidden_set(ForbiddenSetSFT(2, [(1, 1), (1, 1, 0)])).forbidden == ((1, 1),)
    assert minimal_forbidden_set(ForbiddenSetSFT(2, [(1, 1)])).forbidden == ((1, 1),)
    assert minimal_forbidden_set(ForbiddenSetSFT(2, [])).forbidden == ()
    X = ForbiddenSetSFT(2, [(1, 1), (1, 1, 0)])
    for n in range(1, 7):
        assert brute_sft_language(2, [(1, 1)], n) == brute_sft_language(2, X.forbidden, n)


def test_alphabet_mismatch():
    with pytest.raises(AlphabetMismatch):
        ForbiddenSetSFT(2, [(0, 2)])


def test_recode_examples():
    A = recode_to_one_step(ForbiddenSetSFT(2, [(1, 1)]))
    assert A.matrix == ((1, 1), (1, 0))
    for n in range(1, 9):
        assert count_words(A, n) == len(brute_sft_language(2, [(1, 1)], n))
    assert recode_to_one_step(ForbiddenSetSFT(2, [])).matrix == ((1, 1), (1, 1))
    with pytest.raises(EmptyShift):
        recode_to_one_step(ForbiddenSetSFT(2, [(0, 0), (0, 1), (1, 0), (1, 1)]))


def _random_forbidden(rng, d, max_len=4, max_words=4):
    words = set()
    for _ in range(rng.randint(1, max_words)):
        L = rng.randint(1, max_len)
        words.add(tuple(rng.randrange(d) for _ in range(L)))
    return ForbiddenSetSFT(d, words)


def _nonempty(X):
    try:
        recode_to_one_step(X)
        return True
    except EmptyShift:
        return False


def test_minimal_forbidden_set_is_minimal_and_equivalent():
    rng = random.Random(3)
    tested = 0
    while tested < 30:
        X = _random_forbidden(rng, rng.choice([2, 3]), 3)
        if not _nonempty(X):
            continue
        M = minimal_forbidden_set(X)
        for w in M.forbidden:
            for L in range(1, len(w)):
                for i in range(len(w) - L + 1):
                    assert w[i:i + L] in brute_sft_language(X.d, X.forbidden, L)
        for n in range(1, 5):
            assert brute_sft_language(X.d, X.forbidden, n) == brute_sft_language(X.d, M.forbidden, n)
        tested += 1


# ---------------------------------------------------------------- counts

def test_count_words_examples():
    gm = TransitionMatrix([[1, 1], [1, 0]])
    assert [count_words(gm, n) for n in range(1, 7)] == [2, 3, 5, 8, 13, 21]
    assert count_words(TransitionMatrix([[1, 1], [1, 1]]), 5) == 32
    assert count_words(TransitionMatrix([[1]]), 7) == 1
    with pytest.raises(EmptyShift):
        count_words(TransitionMatrix([[0, 1], [0, 0]]), 3)


def test_count_words_matches_enumeration_for_matrices():
    rng = random.Random(5)
    tested = 0
    while tested < 40:
        k = rng.randint(1, 5)
        A = [[int(rng.random() < 0.45) for _ in range(k)] for _ in range(k)]
        try:
            count_words(A, 1)
        except EmptyShift:
            continue
        top = 10 if k <= 3 else 7
        for n in range(1, top + 1):
            assert count_words(A, n) == brute_matrix_count(A, n), (A, n)
        tested += 1


def test_count_words_matches_enumeration_for_forbidden_sets():
    rng = random.Random(9)
    tested = 0
    while tested < 25:
        d = rng.choice([2, 3])
        X = _random_forbidden(rng, d)
        if not _nonempty(X):
            continue
        top = 10 if d == 2 else 7
        for n in range(1, top + 1):
            brute = brute_sft_language(d, X.forbidden, n)
            assert count_words(X, n) == len(brute), (X, n)
            if n <= 6:
                assert enumerate_language(X, n) == brute
        tested += 1


# ---------------------------------------------------------------- Perron roots and entropy

def test_perron_examples():
    lo, hi = perron_root_interval([[1, 1], [1, 0]], 20)
    assert lo <= GOLDEN[1] and GOLDEN[0] <= hi and hi - lo < Fraction(1, 1 << 20)
    lo, hi = perron_root_interval([[1, 1], [1, 1]], 20)
    assert lo <= 2 <= hi
    assert perron_root_interval([[0, 1], [0, 0]], 20) == (0, 0)
    assert perron_root_interval([[0]], 5) == (0, 0)


def test_perron_soundness_all_small_binary_matrices():
    # every binary matrix up to size 3, grouped by characteristic polynomial
    cache = {}
    for k in (1, 2, 3):
        for bits in range(1 << (k * k)):
            A = [[(bits >> (k * i + j)) & 1 for j in range(k)] for i in range(k)]
            key = _charpoly(A)
            if key not in cache:
                cache[key] = spectral_radius_bracket(A)
            rlo, rhi = cache[key]
            lo, hi = perron_root_interval(A, 24)
            assert lo <= rhi and rlo <= hi and hi - lo < Fraction(1, 1 << 24), A


@pytest.mark.slow
def test_perron_soundness_size_four():
    # all 2^16 binary 4x4 matrices: the spectral radius only depends on the
    # characteristic polynomial, so the exact oracle runs once per polynomial
    cache = {}
    for bits in range(1 << 16):
        A = [[(bits >> (4 * i + j)) & 1 for j in range(4)] for i in range(4)]
        key = tuple(_faddeev(A))
        if key not in cache:
            cache[key] = spectral_radius_bracket(A, 40)
        rlo, rhi = cache[key]
        lo, hi = perron_root_interval(A, 20)
        assert lo <= rhi and rlo <= hi, A


def _faddeev(A):
    """Characteristic polynomial coefficients by Faddeev-LeVerrier in integers."""
    n = len(A)
    M = [[0] * n for _ in range(n)]
    coeffs = [1]
    c = 1
    for k in range(1, n + 1):
        M = [[sum(A[i][t] * M[t][j] for t in range(n)) + (c if i == j else 0) for j in range(n)] for i in range(n)]
        AM = [[sum(A[i][t] * M[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        c = -sum(AM[i][i] for i in range(n)) // k
        coeffs.append(c)
    return coeffs


def test_entropy_sft_examples():
    r = entropy_sft(ForbiddenSetSFT(2, [(1, 1)]), 20)
    assert r.status == CONVERGED and r.width < Fraction(1, 1 << 20)
    assert r.contains(Fraction(LOG_PHI)) or abs(float(r.lo) - LOG_PHI) < 1e-15
    for d in (2, 3, 4):
        r = entropy_sft(ForbiddenSetSFT(d, []), 20)
        assert float(r.lo) - 1e-15 <= math.log(d) <= float(r.hi) + 1e-15
    r = entropy_sft(TransitionMatrix([[1, 1, 1]] * 3), 20)
    assert abs(float(r.lo) - math.log(3)) < 2 ** -20
    with pytest.raises(EmptyShift):
        entropy_sft(ForbiddenSetSFT(1, [(0,)]))


def test_empty_shift_examples():
    X = ForbiddenSetSFT(2, [(0,), (1,)])
    assert minimal_forbidden_set(X).forbidden == ((),)
    with pytest.raises(EmptyShift):
        entropy_sft(X)


def test_conjugacy_invariance():
    rng = random.Random(17)
    tested = 0
    while tested < 50:
        X = _random_forbidden(rng, rng.choice([2, 3]))
        if not _nonempty(X):
            continue
        a = entropy_sft(X, 16)
        b = entropy_sft(recode_to_one_step(X), 16)
        assert a.lo <= b.hi and b.lo <= a.hi
        assert a.lo >= 0 and a.hi <= Fraction(math.log(X.d)) + Fraction(1, 1 << 16)
        tested += 1


def test_antitone_in_forbidden_words():
    rng = random.Random(23)
    for _ in range(20):
        d = rng.choice([2, 3])
        words = []
        prev = entropy_sft(ForbiddenSetSFT(d, []), 18)
        for _ in range(6):
            words.append(tuple(rng.randrange(d) for _ in range(rng.randint(2, 4))))
            X = ForbiddenSetSFT(d, words)
            if not _nonempty(X):
                break
            cur = entropy_sft(X, 18)
            assert cur.lo <= prev.hi
            assert cur.hi <= prev.hi + Fraction(1, 1 << 18)
            prev = cur


def test_upper_bounds_sound_for_sfts():
    rng = random.Random(29)
    tested = 0
    while tested < 20:
        X = _random_forbidden(rng, rng.choice([2, 3]), 3)
        if not _nonempty(X):
            continue
        L = LanguageOracle(lambda n, X=X: count_words(X, n))
        hs = entropy_upper_bounds(L, 20)
        lo = entropy_sft(X, 20).lo
        assert all(h >= lo for h in hs)
        assert all(a >= b for a, b in zip(hs, hs[1:]))
        tested += 1


def test_upper_bound_examples():
    hs = entropy_upper_bounds(LanguageOracle.from_counts(fib_counts(32)), 32)
    assert abs(float(hs[0]) - math.log(2)) < 1e-15
    assert hs[-1] <= Fraction(487, 1000)
    full = entropy_upper_bounds(LanguageOracle(lambda n: 2 ** n), 10)
    assert all(abs(float(h) - math.log(2)) < 1e-15 for h in full)
    per2 = entropy_upper_bounds(LanguageOracle(lambda n: 2), 10)
    assert all(abs(float(h) - math.log(2) / k) < 1e-15 for k, h in enumerate(per2, 1))


def test_inconsistent_oracle():
    with pytest.raises(InconsistentOracle):
        entropy_upper_bounds(LanguageOracle.from_counts([2, 5]), 2)
    with pytest.raises(InconsistentOracle):
        entropy_upper_bounds(LanguageOracle.from_counts([2, 0]), 2)


# ---------------------------------------------------------------- sofic

EVEN = LabeledGraph(2, [(0, 0, 1), (0, 1, 0), (1, 0, 0)])


def brute_sofic_language(T, n):
    # every vertex of these test graphs lies on a cycle, so all paths count
    out = set()
    stack = [(v, ()) for v in range(T.vertices)]
    while stack:
        v, w = stack.pop()
        if len(w) == n:
            out.add(w)
            continue
        stack.extend((b, w + (s,)) for a, b, s in T.edges if a == v)
    return out


def test_even_shift():
    r = entropy_sofic(EVEN, 20)
    assert r.status == CONVERGED and r.width < Fraction(1, 1 << 16)
    assert float(r.lo) - 1e-12 <= LOG_PHI <= float(r.hi) + 1e-12
    for n in range(1, 11):
        assert sofic_count_words(EVEN, n) == len(brute_sofic_language(EVEN, n))


def test_sofic_examples():
    rose = LabeledGraph(1, [(0, 0, 0), (0, 0, 1)])
    assert abs(float(entropy_sofic(rose, 20).lo) - math.log(2)) < 2 ** -20
    rose3 = LabeledGraph(1, [(0, 0, 0), (0, 0, 1), (0, 0, 2)])
    assert abs(float(entropy_sofic(rose3, 20).hi) - math.log(3)) < 2 ** -20
    with pytest.raises(EmptyShift):
        entropy_sofic(LabeledGraph(3, [(0, 1, 0), (1, 2, 1)]), 10)


def test_determinization_idempotent():
    rng = random.Random(31)
    graphs = [EVEN]
    while len(graphs) < 15:
        k = rng.randint(1, 4)
        edges = [(rng.randrange(k), rng.randrange(k), rng.randrange(2)) for _ in range(rng.randint(1, 6))]
        T = LabeledGraph(k, edges, 2)
        try:
            entropy_sofic(T, 10)
        except EmptyShift:
            continue
        graphs.append(T)
    for T in graphs:
        D = sofic_determinize(T).as_labeled_graph()
        a, b = entropy_sofic(T, 18), entropy_sofic(D, 18)
        assert a.lo <= b.hi and b.lo <= a.hi
        for n in range(1, 7):
            assert sofic_count_words(T, n) == sofic_count_words(D, n)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 1)), min_size=1, max_size=7))
def test_sofic_counts_match_paths(edges):
    T = LabeledGraph(3, edges, 2)
    try:
        entropy_sofic(T, 8)
    except EmptyShift:
        return
    # restrict the brute force to bi-essential vertices by hand
    A = [[0] * 3 for _ in range(3)]
    for a, b, _ in edges:
        A[a][b] = 1
    P = np.linalg.matrix_power(np.array(A, dtype=np.int64), 3)
    good = [v for v in range(3) if P[v].sum() > 0 and P[:, v].sum() > 0]
    sub = LabeledGraph(3, [(a, b, s) for a, b, s in edges if a in good and b in good], 2)
    for n in range(1, 7):
        words = set()
        stack = [(v, ()) for v in good]
        while stack:
            v, w = stack.pop()
            if len(w) == n:
                words.add(w)
                continue
            stack.extend((b, w + (s,)) for a, b, s in sub.edges if a == v)
        assert sofic_count_words(T, n) == len(words)


# ---------------------------------------------------------------- coded shifts

def test_coded_rose_examples():
    G = GeneratingSet(2, [(0,), (0, 1)])
    T = coded_sofic_approximation(G, 2)
    assert T.vertices == 2 and sorted(T.edges) == [(0, 0, 0), (0, 1, 0), (1, 0, 1)]
    for n in range(1, 9):
        assert sofic_count_words(T, n) == len(brute_sft_language(2, [(1, 1)], n))
    single = coded_sofic_approximation(GeneratingSet(2, [(0,)]), 1)
    assert entropy_sofic(single, 10).hi < Fraction(1, 1 << 10)
    full = coded_sofic_approximation(GeneratingSet(2, [(0,), (1,)]), 2)
    assert abs(float(entropy_sofic(full, 20).lo) - math.log(2)) < 2 ** -20


def test_coded_zero_entropy():
    r = entropy_coded(GeneratingSet(1, [(0,)]), LanguageOracle(lambda n: 1), p=10)
    assert r.status == CONVERGED and r.lo == 0 and r.hi < Fraction(1, 1 << 10)


def test_coded_bounds_monotone():
    # S = all even gaps: generators 1, 100, 10000, ... served by an oracle
    G = GeneratingSet(2, [(1,)], oracle=lambda i: (1,) + (0,) * (2 * i))
    L = LanguageOracle.from_counts(even_gap_counts(200))
    r = entropy_coded(G, L, p=14, max_m=12, max_n=200)
    lo_seq, hi_seq = r.info["lo_sequence"], r.info["hi_sequence"]
    assert all(a <= b for a, b in zip(lo_seq, lo_seq[1:]))
    assert all(a >= b for a, b in zip(hi_seq, hi_seq[1:]))
    assert max(lo_seq) <= min(hi_seq)


def test_coded_budget_exhausted():
    G = GeneratingSet(2, [(0,), (0, 1)])
    r = entropy_coded(G, LanguageOracle.from_counts(fib_counts(8)), p=20, max_m=2, max_n=8)
    assert r.status == BUDGET_EXHAUSTED
    assert r.lo <= Fraction(LOG_PHI) <= r.hi


def even_gap_counts(N):
    """Same for S = all even numbers: the even shift with the roles of 0 and 1 swapped."""
    return [sofic_count_words(EVEN, n) for n in range(1, N + 1)]


def test_sgap_counts_against_brute_force():
    # brute force on the sofic rose of {1, 100}: every vertex is on a cycle
    rose = coded_sofic_approximation(GeneratingSet(2, [(1,), (1, 0, 0)]), 2)
    for n in range(1, 13):
        assert sgap_counts(n)[-1] == len(brute_sofic_language(rose, n))


def test_zero_entropy_examples():
    out = zero_entropy_semialgorithm(LanguageOracle(lambda n: 2), Fraction(1, 10), 100)
    assert out.kind == "Value" and out.n == 7
    assert abs(float(out.h_n) - math.log(2) / 7) < 1e-15
    out = zero_entropy_semialgorithm(LanguageOracle(lambda n: 2 ** n), Fraction(1, 10), 100)
    assert out.kind == "Inconclusive"
    out = zero_entropy_semialgorithm(LanguageOracle(lambda n: n + 1), Fraction(1, 2), 100)
    assert out.kind == "Value" and math.log(out.n + 1) / out.n < 0.5 + 1e-12
    with pytest.raises(ValueError):
        zero_entropy_semialgorithm(LanguageOracle(lambda n: 2), 0, 10)


# ---------------------------------------------------------------- JSON

@pytest.mark.parametrize("X", [
    ForbiddenSetSFT(2, [(1, 1)]),
    TransitionMatrix([[1, 1], [1, 0]]),
    LabeledGraph(2, [(0, 0, 1), (0, 1, 0), (1, 0, 0)]),
    GeneratingSet(2, [(1,), (1, 0, 0)], True, complete=True),
])
def test_presentation_round_trip(X):
    Y = presentation_from_json(presentation_to_json(X))
    assert presentation_to_json(Y) == presentation_to_json(X)


def test_bad_presentation():
    with pytest.raises(ValueError):
        presentation_from_json({"nothing": 1})
