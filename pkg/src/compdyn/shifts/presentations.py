"""Shift-space presentations and result containers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from ..errors import AlphabetMismatch

Word = tuple


def as_word(w, d: int | None = None) -> Word:
    w = tuple(int(s) for s in w)
    if d is not None and any(s < 0 or s >= d for s in w):
        raise AlphabetMismatch(f"word {list(w)} uses symbols outside 0..{d - 1}")
    return w


def word_key(w: Word):
    return (len(w), w)


@dataclass(frozen=True)
class ForbiddenSetSFT:
    d: int
    forbidden: tuple = ()

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("alphabet must be nonempty")
        words = {as_word(w, self.d) for w in self.forbidden}
        object.__setattr__(self, "forbidden", tuple(sorted(words, key=word_key)))

    @property
    def max_length(self) -> int:
        return max((len(w) for w in self.forbidden), default=0)


@dataclass(frozen=True)
class TransitionMatrix:
    """Vertex-shift presentation.  Entries are nonnegative integers (binary for an SFT).

    ``labels`` optionally names each vertex, e.g. by the higher-block word it stands for.
    """

    matrix: tuple
    labels: Optional[tuple] = None

    def __post_init__(self):
        rows = tuple(tuple(int(a) for a in row) for row in self.matrix)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("transition matrix must be square")
        if any(a < 0 for r in rows for a in r):
            raise ValueError("transition matrix must be nonnegative")
        object.__setattr__(self, "matrix", rows)
        if self.labels is not None:
            if len(self.labels) != n:
                raise ValueError("one label per vertex required")
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def size(self) -> int:
        return len(self.matrix)

    def is_binary(self) -> bool:
        return all(a in (0, 1) for r in self.matrix for a in r)

    def successors(self) -> list[list[int]]:
        return [[j for j, a in enumerate(r) if a] for r in self.matrix]


@dataclass(frozen=True)
class LabeledGraph:
    vertices: int
    edges: tuple
    d: Optional[int] = None

    def __post_init__(self):
        edges = tuple((int(a), int(b), int(s)) for a, b, s in self.edges)
        for a, b, s in edges:
            if not (0 <= a < self.vertices and 0 <= b < self.vertices):
                raise ValueError(f"edge ({a}, {b}) leaves the vertex range")
            if s < 0:
                raise AlphabetMismatch(f"negative label {s}")
        d = self.d if self.d is not None else (max((s for _, _, s in edges), default=-1) + 1 or 1)
        if any(s >= d for _, _, s in edges):
            raise AlphabetMismatch(f"label outside alphabet of size {d}")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "d", d)


@dataclass(frozen=True)
class GeneratingSet:
    """Generators of a coded shift.

    ``generators`` is the materialized prefix.  ``oracle``, if given, maps an index
    i >= 0 to the i-th generator and lets callers ask for more than were listed.
    ``complete`` asserts the listed generators are all of them, in which case
    the coded shift coincides with its last sofic approximation.
    """

    d: int
    generators: tuple
    unique_representation: bool = False
    oracle: Optional[Callable[[int], Sequence[int]]] = field(default=None, compare=False)
    complete: bool = False

    def __post_init__(self):
        gens = tuple(as_word(g, self.d) for g in self.generators)
        if any(len(g) == 0 for g in gens):
            raise ValueError("generators must be nonempty")
        object.__setattr__(self, "generators", gens)

    def first(self, m: int) -> tuple:
        if m <= len(self.generators):
            return self.generators[:m]
        if self.oracle is None:
            raise ValueError(f"only {len(self.generators)} generators available, {m} requested")
        gens = list(self.generators)
        for i in range(len(gens), m):
            g = as_word(self.oracle(i), self.d)
            if not g:
                raise ValueError("generators must be nonempty")
            gens.append(g)
        return tuple(gens)


class LanguageOracle:
    """Exact word counts #L(X, n); results are cached."""

    def __init__(self, query: Callable[[int], int], name: str = ""):
        self._query = query
        self._cache: dict[int, int] = {}
        self.name = name

    def __call__(self, n: int) -> int:
        if n not in self._cache:
            self._cache[n] = int(self._query(n))
        return self._cache[n]

    def counts(self, n_max: int) -> list[int]:
        """[#L(1), ..., #L(n_max)]."""
        return [self(j) for j in range(1, n_max + 1)]

    @classmethod
    def from_counts(cls, counts: Sequence[int], name: str = "") -> "LanguageOracle":
        counts = list(counts)
        return cls(lambda n: counts[n - 1], name=name)


CONVERGED = "Converged"
BUDGET_EXHAUSTED = "BudgetExhausted"


@dataclass(frozen=True)
class EntropyResult:
    """Validated enclosure [lo, hi] of a topological entropy, in nats."""

    lo: Fraction
    hi: Fraction
    status: str = CONVERGED
    info: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty entropy interval")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def in_bits(self) -> "EntropyResult":
        from ..core.logbounds import ln2_bounds

        l2lo, l2hi = ln2_bounds(80)
        return EntropyResult(self.lo / l2hi, self.hi / l2lo, self.status, dict(self.info))

    def to_json(self) -> dict:
        return {
            "lo": str(self.lo),
            "hi": str(self.hi),
            "lo_float": float(self.lo),
            "hi_float": float(self.hi),
            "status": self.status,
        }
