"""Coded shifts, language-based upper bounds, and the zero-entropy semi-algorithm."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..core.logbounds import log_upper
from ..errors import EmptyShift, InconsistentOracle
from .presentations import (
    BUDGET_EXHAUSTED,
    CONVERGED,
    EntropyResult,
    GeneratingSet,
    LabeledGraph,
    LanguageOracle,
)
from .sofic import entropy_sofic

log = logging.getLogger(__name__)


def _check_counts(counts: list[int]) -> None:
    """Raise InconsistentOracle unless counts are positive, nondecreasing and submultiplicative.

    Full pairwise submultiplicativity is checked up to length 64; beyond that
    the splits j = 1 and j = n // 2 are checked.
    """
    for n in range(1, len(counts) + 1):
        _check_count_at(counts, n)


def entropy_upper_bounds(L: LanguageOracle, n: int, bits: int = 64, check: bool = True) -> list[Fraction]:
    """[h_1, ..., h_n] with h_k = min_{j<=k} log(#L(j)) / j, each rounded upward.

    Every h_k is an upper bound on the entropy of the shift.
    """
    counts = L.counts(n)
    if check:
        _check_counts(counts)
    out = []
    best: Optional[Fraction] = None
    for j, c in enumerate(counts, start=1):
        v = log_upper(c, bits) / j
        best = v if best is None or v < best else best
        out.append(best)
    return out


@dataclass(frozen=True)
class ZeroEntropyOutcome:
    kind: str                # "Value" or "Inconclusive"
    value: Fraction          # h_n / 2 for Value, best h_n otherwise
    n: int
    h_n: Fraction


def zero_entropy_semialgorithm(L: LanguageOracle, eps, budget: int) -> ZeroEntropyOutcome:
    """Search for n <= budget with h_n < eps.  On success the entropy lies within
    eps of h_n / 2, since 0 <= H <= h_n."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    best: Optional[Fraction] = None
    counts: list[int] = []
    for j in range(1, budget + 1):
        counts.append(L(j))
        _check_count_at(counts, len(counts))
        v = log_upper(counts[-1], 64) / j
        best = v if best is None or v < best else best
        if best < eps:
            return ZeroEntropyOutcome("Value", best / 2, j, best)
    return ZeroEntropyOutcome("Inconclusive", best if best is not None else Fraction(0), budget, best or Fraction(0))


def _check_count_at(counts: list[int], n: int) -> None:
    c = counts[n - 1]
    if c < 1:
        raise InconsistentOracle(f"#L({n}) = {c} is not positive")
    if n > 1 and c < counts[n - 2]:
        raise InconsistentOracle(f"#L({n}) < #L({n - 1})")
    for j in ((1, n // 2) if n > 64 else range(1, n // 2 + 1)):
        if c > counts[j - 1] * counts[n - j - 1]:
            raise InconsistentOracle(f"#L({n}) > #L({j}) #L({n - j})")


def coded_sofic_approximation(G: GeneratingSet, m: int) -> LabeledGraph:
    """Rose graph presenting X_m: one base vertex 0 and, per generator, a cycle
    through fresh vertices spelling it."""
    gens = G.first(m)
    edges = []
    nv = 1
    for g in gens:
        if len(g) == 1:
            edges.append((0, 0, g[0]))
            continue
        path = [0] + list(range(nv, nv + len(g) - 1)) + [0]
        nv += len(g) - 1
        for k, s in enumerate(g):
            edges.append((path[k], path[k + 1], s))
    return LabeledGraph(nv, edges, G.d)


def entropy_coded(
    G: GeneratingSet,
    L: LanguageOracle,
    p: int = 10,
    max_m: int = 64,
    max_n: int = 4096,
) -> EntropyResult:
    """Two-sided enclosure: lower bounds from the sofic approximations X_m and
    upper bounds h_n from the language oracle, interleaved until the gap is
    below 2^-p or both budgets are spent.

    The interval is sound whatever the caller asserts about the generating set.
    If ``G.complete`` the coded shift equals X_m for the full list, so its sofic
    upper bound is used too.
    """
    target = Fraction(1, 1 << p)
    avail = len(G.generators) if G.oracle is None else max_m
    max_m = min(max_m, avail)
    bits = p + 16
    lo = Fraction(0)
    hi: Optional[Fraction] = None
    lo_seq: list[Fraction] = []
    hi_seq: list[Fraction] = []
    counts: list[int] = []
    m = n = 0
    status = BUDGET_EXHAUSTED

    def done() -> bool:
        return hi is not None and hi - lo < target

    while not done() and (m < max_m or n < max_n):
        if m < max_m:
            m += 1
            try:
                r = entropy_sofic(coded_sofic_approximation(G, m), bits)
            except EmptyShift:
                r = None
            if r is not None:
                lo = max(lo, r.lo)
                if G.complete and m == len(G.generators) and G.oracle is None:
                    hi = r.hi if hi is None else min(hi, r.hi)
            lo_seq.append(lo)
        # advance the language side in doubling chunks so both sides progress
        step = max(1, n) if m >= max_m else max(1, min(n, 8))
        stop = min(max_n, n + step)
        while n < stop:
            n += 1
            counts.append(L(n))
            _check_count_at(counts, len(counts))
            v = log_upper(counts[-1], bits) / n
            hi = v if hi is None else min(hi, v)
            hi_seq.append(hi)
            if done():
                break
        if hi is not None and lo > hi:
            raise InconsistentOracle("sofic lower bound exceeds the language upper bound")
    if done():
        status = CONVERGED
    if hi is None:
        raise InconsistentOracle("no upper bound available")
    log.debug("coded entropy: m=%d n=%d lo=%.6f hi=%.6f", m, n, float(lo), float(hi))
    return EntropyResult(lo, hi, status, {
        "m": m,
        "n": n,
        "lo_sequence": lo_seq,
        "hi_sequence": hi_seq,
        "unique_representation": G.unique_representation,
    })
