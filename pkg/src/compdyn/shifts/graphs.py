"""Graph helpers: bi-essential trimming and strongly connected components."""

from __future__ import annotations

from collections import deque

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components


def trim(n: int, arcs) -> list[int]:
    """Vertices lying on a bi-infinite path, i.e. surviving repeated removal of
    vertices with no incoming or no outgoing arc.  ``arcs`` is an iterable of (u, v)."""
    succ = [set() for _ in range(n)]
    pred = [set() for _ in range(n)]
    for u, v in arcs:
        succ[u].add(v)
        pred[v].add(u)
    alive = [True] * n
    queue = deque(v for v in range(n) if not succ[v] or not pred[v])
    while queue:
        v = queue.popleft()
        if not alive[v]:
            continue
        alive[v] = False
        for w in succ[v]:
            pred[w].discard(v)
            if alive[w] and not pred[w]:
                queue.append(w)
        for w in pred[v]:
            succ[w].discard(v)
            if alive[w] and not succ[w]:
                queue.append(w)
    return [v for v in range(n) if alive[v]]


def trim_matrix(A) -> tuple[list[list[int]], list[int]]:
    """Restrict a square integer matrix to its bi-essential vertices."""
    n = len(A)
    keep = trim(n, ((i, j) for i in range(n) for j in range(n) if A[i][j]))
    return [[A[i][j] for j in keep] for i in keep], keep


def strong_components(A) -> list[list[int]]:
    """Strongly connected components that carry a cycle."""
    n = len(A)
    if n == 0:
        return []
    M = np.array([[1 if a else 0 for a in row] for row in A], dtype=np.int8)
    ncomp, labels = connected_components(csr_matrix(M), directed=True, connection="strong")
    comps: dict[int, list[int]] = {}
    for v, c in enumerate(labels):
        comps.setdefault(int(c), []).append(v)
    out = []
    for c in sorted(comps, key=lambda c: comps[c][0]):
        vs = comps[c]
        if len(vs) > 1 or A[vs[0]][vs[0]]:
            out.append(vs)
    return out
