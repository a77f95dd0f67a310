"""Shifts of finite type: minimal forbidden sets, one-step recoding, entropy, word counts."""

from __future__ import annotations

from fractions import Fraction

from ..core.logbounds import log_lower, log_upper
from ..errors import EmptyShift
from .graphs import trim, trim_matrix
from .perron import perron_root_interval
from .presentations import (
    CONVERGED,
    EntropyResult,
    ForbiddenSetSFT,
    TransitionMatrix,
    Word,
    word_key,
)


def _locally_allowed(d: int, forbidden: set, N: int) -> list[Word]:
    """Words of length N containing no forbidden factor, in lexicographic order."""
    lengths = sorted({len(f) for f in forbidden})
    words = [()]
    for _ in range(N):
        nxt = []
        for w in words:
            for s in range(d):
                u = w + (s,)
                # only factors ending at the new symbol need checking
                if all(len(u) < L or u[len(u) - L:] not in forbidden for L in lengths):
                    nxt.append(u)
        words = nxt
    return words


def _block_graph(d: int, forbidden: set, N: int):
    verts = _locally_allowed(d, forbidden, N)
    index = {w: i for i, w in enumerate(verts)}
    lengths = sorted({len(f) for f in forbidden})
    n = len(verts)
    A = [[0] * n for _ in range(n)]
    for i, u in enumerate(verts):
        for s in range(d):
            v = u[1:] + (s,)
            j = index.get(v)
            if j is None:
                continue
            glued = u + (s,)
            if all(len(glued) < L or glued[len(glued) - L:] not in forbidden for L in lengths):
                A[i][j] = 1
    return verts, A


def _empty_word_in(forbidden) -> bool:
    return any(len(w) == 0 for w in forbidden)


def _language_up_to(X: ForbiddenSetSFT, K: int) -> list[set]:
    """lang[j] = L(X, j) for j <= K (K >= 1).  Raises EmptyShift."""
    if _empty_word_in(X.forbidden):
        raise EmptyShift()
    forb = set(X.forbidden)
    N = max(K - 1, 1)
    verts, A = _block_graph(X.d, forb, N)
    keep = set(trim(len(verts), ((i, j) for i in range(len(verts)) for j in range(len(verts)) if A[i][j])))
    if not keep:
        raise EmptyShift()
    # words of length N+1 on the trimmed graph are exactly L(X, N+1)
    top = set()
    for i in keep:
        for j in keep:
            if A[i][j]:
                top.add(verts[i] + verts[j][-1:])
    lang = [set() for _ in range(N + 2)]
    lang[0].add(())
    lang[N + 1] = top
    for L in range(N, 0, -1):
        lang[L] = {w[:L] for w in lang[L + 1]} | {w[1:] for w in lang[L + 1]}
    return lang[:K + 1]


def minimal_forbidden_set(X: ForbiddenSetSFT) -> ForbiddenSetSFT:
    """The unique minimal forbidden set presenting the same shift, sorted by (length, lex).

    A word belongs to it iff it is not in the language while both of its maximal
    proper factors are.  Such words are never longer than the longest given
    forbidden word, so the search is finite.  The empty shift is presented by
    the empty word.
    """
    d = X.d
    K = X.max_length
    try:
        lang = _language_up_to(X, max(K, 1))
    except EmptyShift:
        return ForbiddenSetSFT(d, ((),))
    out = []
    for L in range(1, K + 1):
        for u in lang[L - 1]:
            for s in range(d):
                w = u + (s,)
                if w not in lang[L] and w[1:] in lang[L - 1]:
                    out.append(w)
    return ForbiddenSetSFT(d, tuple(sorted(set(out), key=word_key)))


def step_size(X: ForbiddenSetSFT) -> int:
    """One less than the longest word of the minimal forbidden set (at least 1)."""
    return max(minimal_forbidden_set(X).max_length - 1, 1)


def recode_to_one_step(X: ForbiddenSetSFT) -> TransitionMatrix:
    """Higher-block presentation on locally allowed words of length N = step size.

    The returned matrix is not trimmed; vertex labels are the N-blocks.
    Raises EmptyShift when no bi-infinite path survives trimming.
    """
    M = minimal_forbidden_set(X)
    if _empty_word_in(M.forbidden):
        raise EmptyShift()
    N = max(M.max_length - 1, 1)
    verts, A = _block_graph(X.d, set(M.forbidden), N)
    if not trim(len(verts), ((i, j) for i in range(len(verts)) for j in range(len(verts)) if A[i][j])):
        raise EmptyShift()
    return TransitionMatrix(A, labels=verts)


def _as_matrix(X) -> list[list[int]]:
    if isinstance(X, ForbiddenSetSFT):
        return [list(r) for r in recode_to_one_step(X).matrix]
    if isinstance(X, TransitionMatrix):
        return [list(r) for r in X.matrix]
    return [list(map(int, r)) for r in X]


def entropy_from_matrix(A, p: int) -> EntropyResult:
    """log of the spectral radius of the trimmed matrix, as an interval of width < 2^-p."""
    B, keep = trim_matrix(A)
    if not keep:
        raise EmptyShift()
    lo, hi = perron_root_interval(B, p + 2)
    # rho >= 1 on a nonempty trimmed graph, so log is 1-Lipschitz there
    lo = max(lo, Fraction(1))
    hi = max(hi, lo)
    elo = max(Fraction(0), log_lower(lo, p + 3))
    ehi = max(elo, log_upper(hi, p + 3))
    return EntropyResult(elo, ehi, CONVERGED, {"rho_lo": lo, "rho_hi": hi, "vertices": len(keep)})


def entropy_sft(X, p: int = 20) -> EntropyResult:
    """Entropy of an SFT given as a forbidden set or a transition matrix."""
    return entropy_from_matrix(_as_matrix(X), p)


def _vertex_presentation(X):
    """(trimmed matrix, block length N, labels of the kept vertices).

    A forbidden-set SFT is counted on its N-block recoding: words of length
    n >= N are paths with n - N + 1 vertices, shorter words are prefixes of
    the kept blocks.  A matrix is its own vertex shift with N = 1.
    """
    if isinstance(X, ForbiddenSetSFT):
        T = recode_to_one_step(X)
        B, keep = trim_matrix([list(r) for r in T.matrix])
        N = len(T.labels[0]) if T.labels else 1
        return B, N, [T.labels[i] for i in keep]
    B, keep = trim_matrix(_as_matrix(X))
    return B, 1, None


def count_words(A, n: int) -> int:
    """#L(X, n) for a vertex shift (n-vertex paths of the trimmed graph) or a forbidden-set SFT."""
    return word_counter(A)(n)


def word_counter(A):
    """LanguageOracle with exact counts #L(X, n), computed incrementally."""
    from .presentations import LanguageOracle

    B, N, labels = _vertex_presentation(A)
    if not B:
        raise EmptyShift()
    rows = [[(j, a) for j, a in enumerate(r) if a] for r in B]
    state = {"n": 1, "v": [1] * len(B)}
    totals = {1: len(B)}

    def paths(n: int) -> int:
        while state["n"] < n:
            v = state["v"]
            state["v"] = [sum(a * v[j] for j, a in row) for row in rows]
            state["n"] += 1
            totals[state["n"]] = sum(state["v"])
        return totals[n]

    def query(n: int) -> int:
        if n < 1:
            raise ValueError("n must be positive")
        if n >= N:
            return paths(n - N + 1)
        return len({w[:n] for w in labels})

    return LanguageOracle(query, name="vertex-shift")


def enumerate_language(X: ForbiddenSetSFT, n: int) -> set:
    """L(X, n) by direct search (exponential; for cross-checks on small cases)."""
    if n <= max(X.max_length, 1):
        return _language_up_to(X, max(X.max_length, 1))[n]
    K = max(X.max_length, 1)
    N = max(K - 1, 1)
    forb = set(X.forbidden)
    verts, A = _block_graph(X.d, forb, N)
    keep = trim(len(verts), ((i, j) for i in range(len(verts)) for j in range(len(verts)) if A[i][j]))
    if not keep:
        raise EmptyShift()
    keepset = set(keep)
    out = set()
    stack = [(i, verts[i]) for i in keep]
    while stack:
        i, w = stack.pop()
        if len(w) == n:
            out.add(w)
            continue
        for j in keepset:
            if A[i][j]:
                stack.append((j, w + verts[j][-1:]))
    return out
