"""Sofic shifts: subset construction, entropy and word counts."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from ..errors import EmptyShift
from .graphs import trim
from .presentations import EntropyResult, LabeledGraph, LanguageOracle
from .sft import entropy_from_matrix


@dataclass(frozen=True)
class Determinization:
    """Right-resolving presentation produced by the subset construction.

    ``states`` are frozensets of vertices of the trimmed input graph; state 0 is
    the full vertex set.  ``transitions[i]`` maps a label to a target state.
    ``matrix`` counts labeled edges between the retained (bi-essential) states.
    """

    states: tuple
    transitions: tuple
    kept: tuple
    matrix: tuple

    def as_labeled_graph(self) -> LabeledGraph:
        pos = {s: i for i, s in enumerate(self.kept)}
        edges = []
        for s in self.kept:
            for a, t in sorted(self.transitions[s].items()):
                if t in pos:
                    edges.append((pos[s], pos[t], a))
        d = 1 + max((a for _, _, a in edges), default=0)
        return LabeledGraph(len(self.kept), edges, d)

    def label_map(self) -> dict:
        """(from, to) in retained-state numbering -> sorted labels on that edge."""
        pos = {s: i for i, s in enumerate(self.kept)}
        out: dict = {}
        for s in self.kept:
            for a, t in self.transitions[s].items():
                if t in pos:
                    out.setdefault((pos[s], pos[t]), []).append(a)
        return {k: sorted(v) for k, v in sorted(out.items())}


def _trimmed_edges(T: LabeledGraph):
    keep = trim(T.vertices, ((a, b) for a, b, _ in T.edges))
    ks = set(keep)
    return keep, [(a, b, s) for a, b, s in T.edges if a in ks and b in ks]


def _subset_automaton(T: LabeledGraph):
    keep, edges = _trimmed_edges(T)
    if not keep:
        raise EmptyShift()
    step: dict = {}
    for a, b, s in edges:
        step.setdefault((a, s), set()).add(b)
    labels = sorted({s for _, _, s in edges})
    start = frozenset(keep)
    states = [start]
    index = {start: 0}
    transitions = []
    queue = deque([start])
    while queue:
        S = queue.popleft()
        out = {}
        for s in labels:
            tgt = set()
            for v in S:
                tgt |= step.get((v, s), set())
            if not tgt:
                continue
            tgt = frozenset(tgt)
            if tgt not in index:
                index[tgt] = len(states)
                states.append(tgt)
                queue.append(tgt)
            out[s] = index[tgt]
        transitions.append(out)
    return states, transitions


def sofic_determinize(T: LabeledGraph) -> Determinization:
    states, transitions = _subset_automaton(T)
    n = len(states)
    kept = tuple(trim(n, ((i, j) for i in range(n) for j in transitions[i].values())))
    if not kept:
        raise EmptyShift()
    pos = {s: i for i, s in enumerate(kept)}
    M = [[0] * len(kept) for _ in kept]
    for s in kept:
        for t in transitions[s].values():
            if t in pos:
                M[pos[s]][pos[t]] += 1
    return Determinization(tuple(states), tuple(transitions), kept, tuple(tuple(r) for r in M))


def entropy_sofic(T: LabeledGraph, p: int = 20) -> EntropyResult:
    D = sofic_determinize(T)
    r = entropy_from_matrix([list(row) for row in D.matrix], p)
    r.info["states"] = len(D.states)
    return r


def sofic_word_counter(T: LabeledGraph) -> LanguageOracle:
    """#L(X_T, n): label words of paths in the trimmed graph, counted as paths of
    the subset automaton from its start state."""
    states, transitions = _subset_automaton(T)
    rows = [list(tr.values()) for tr in transitions]
    # reverse counting: c_n(s) = number of label words of length n readable from s
    state = {"n": 0, "c": [1] * len(states)}
    totals: dict[int, int] = {}

    def query(n: int) -> int:
        while state["n"] < n:
            c = state["c"]
            state["c"] = [sum(c[t] for t in row) for row in rows]
            state["n"] += 1
            totals[state["n"]] = state["c"][0]
        return totals[n]

    return LanguageOracle(query, name="sofic")


def sofic_count_words(T: LabeledGraph, n: int) -> int:
    return sofic_word_counter(T)(n)
