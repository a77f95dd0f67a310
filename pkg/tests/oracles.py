"""Independent reference computations shared by the test modules."""

import math
from fractions import Fraction

import numpy as np
from scipy.optimize import linear_sum_assignment


def bisect_root(fn, lo, hi, steps=80):
    """Sign-change bisection in exact rationals."""
    lo, hi = Fraction(lo), Fraction(hi)
    flo = fn(lo)
    for _ in range(steps):
        mid = (lo + hi) / 2
        fm = fn(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


GOLDEN = bisect_root(lambda x: x * x - x - 1, 1, 2)
SGAP_ROOT = bisect_root(lambda x: x ** 3 - x ** 2 - 1, 1, 2)


def fib_counts(n):
    """#L(n) = F_{n+2} for the golden-mean shift."""
    a, b = 2, 3
    out = []
    for _ in range(n):
        out.append(a)
        a, b = b, a + b
    return out


def sgap_counts(N):
    """#L(n), n = 1..N, for the S-gap shift S = {0, 2}: binary words in which
    every 0-run between two 1s has length 0 or 2 and outer runs have length <= 2."""
    # states: ("start", r) = r zeros and no 1 yet, ("one", r) = r zeros since the last 1
    dp = {("start", 0): 1}
    out = []
    for _ in range(N):
        nxt = {}
        for (kind, r), c in dp.items():
            if r < 2:
                nxt[(kind, r + 1)] = nxt.get((kind, r + 1), 0) + c
            if kind == "start" or r in (0, 2):
                nxt[("one", 0)] = nxt.get(("one", 0), 0) + c
        dp = nxt
        out.append(sum(dp.values()))
    return out


def hungarian_cost(a, b, cost):
    """Optimal transport cost by splitting rational masses into equal units and
    solving the assignment problem; the optimum is re-summed in exact arithmetic."""
    den = 1
    for w in list(a) + list(b):
        den = math.lcm(den, Fraction(w).denominator)
    rows = [i for i, w in enumerate(a) for _ in range(int(Fraction(w) * den))]
    cols = [j for j, w in enumerate(b) for _ in range(int(Fraction(w) * den))]
    C = np.array([[float(cost[i][j]) for j in cols] for i in rows])
    r, c = linear_sum_assignment(C)
    return sum((Fraction(cost[rows[i]][cols[j]]) for i, j in zip(r, c)), Fraction(0)) / den


def random_weights(rng, k, den):
    """k positive weights with denominator den summing to 1."""
    cuts = sorted(rng.sample(range(1, den), k - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    return [Fraction(p, den) for p in parts]
