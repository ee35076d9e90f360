"""Surjections n -> k with order-preserving block merges.

An object is a surjection alpha: {1..n} ->> {1..k}; a morphism merges
consecutive blocks (the codomain map is order-preserving), so the grade
analog of an internal edge is a *gap* between adjacent blocks: gap i
separates block i from block i+1, giving e(alpha) = k - 1 gaps.  An
elementary morphism merges one consecutive run of >= 2 blocks; its fiber
is the restriction of alpha to that run (renumbered), its quotient the
merged surjection.  Unlike the graph flavors, this category is rigid:
every isomorphism is an identity, so objects, their canonical forms and
their virtual classes all coincide.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

PER = "Per"


class PerObject:
    """A surjection onto an initial segment, stored by its value tuple."""

    __slots__ = ("values", "k", "_hash")

    flavor = PER

    def __init__(self, values: Sequence[int]):
        values = tuple(values)
        assert len(values) >= 1, "the domain is nonempty"
        k = max(values)
        assert sorted(set(values)) == list(range(1, k + 1)), \
            "values must cover 1..k: %r" % (values,)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "_hash", hash(values))

    def __setattr__(self, name, value):
        raise AttributeError("PerObject is immutable")

    @property
    def n(self) -> int:
        return len(self.values)

    def grade(self) -> int:
        return self.k - 1

    def edges(self) -> tuple[int, ...]:
        """Gap i sits between block i and block i+1; gaps play the role
        internal edges play for graphs."""
        return tuple(range(1, self.k))

    def block(self, i: int) -> tuple[int, ...]:
        """Domain points of block i, in order."""
        return tuple(p for p, v in enumerate(self.values, start=1) if v == i)

    def encode(self) -> tuple:
        return (PER, self.values)

    def __eq__(self, other):
        return isinstance(other, PerObject) and self.values == other.values

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "PerObject(%r)" % (self.values,)

    def to_json(self) -> str:
        return json.dumps({"flavor": PER, "map": list(self.values)},
                          sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json(text: str) -> "PerObject":
        data = json.loads(text)
        assert data["flavor"] == PER
        return PerObject(data["map"])


@dataclass(frozen=True)
class PerSplit:
    """One elementary merge: the consecutive gap run `fiber_edges`
    (blocks a..b of the source) collapses into block `vertex_index` of
    the quotient.  Mirrors graphs.ElementarySplit field for field."""

    source: PerObject
    fiber_edges: tuple[int, ...]
    fiber: PerObject
    quotient: PerObject
    vertex_index: int

    def __post_init__(self):
        assert self.source.grade() == \
            self.quotient.grade() + self.fiber.grade()

    def quotient_edge(self, gap: int) -> int:
        a = self.fiber_edges[0]
        b = self.fiber_edges[-1] + 1   # blocks a..b merge
        assert gap < a or gap > b - 1, "gap %d was contracted" % gap
        return gap if gap < a else gap - (b - a)

    def fiber_edge(self, gap: int) -> int:
        a = self.fiber_edges[0]
        assert gap in self.fiber_edges
        return gap - a + 1


def contract(alpha: PerObject, gaps: Iterable[int]) -> PerSplit:
    """Merge the consecutive block run spanned by `gaps` (which must be a
    nonempty run of consecutive gap indices)."""
    gaps = sorted(set(gaps))
    assert gaps, "merge at least one gap"
    assert all(1 <= g <= alpha.k - 1 for g in gaps), "gaps out of range"
    assert gaps == list(range(gaps[0], gaps[0] + len(gaps))), \
        "the merged gaps must be consecutive (a connected run of blocks)"
    a, b = gaps[0], gaps[-1] + 1       # merge blocks a..b
    fiber_points = [v for v in alpha.values if a <= v <= b]
    fiber = PerObject([v - a + 1 for v in fiber_points])
    quotient = PerObject([v if v < a else (a if v <= b else v - (b - a))
                          for v in alpha.values])
    return PerSplit(alpha, tuple(gaps), fiber, quotient, a)


def admissible_splits(alpha: PerObject,
                      require_quotient_grade_ge_1: bool = False
                      ) -> list[PerSplit]:
    """All elementary merges: one per consecutive run of >= 2 blocks."""
    out = []
    k = alpha.k
    for a in range(1, k):
        for b in range(a + 1, k + 1):
            if require_quotient_grade_ge_1 and b - a == k - 1:
                continue
            out.append(contract(alpha, range(a, b)))
    return out


def is_local_terminal(alpha: PerObject) -> bool:
    return alpha.k == 1


def is_chosen_terminal(alpha: PerObject) -> bool:
    # the category is rigid: every local terminal is the chosen one
    return alpha.k == 1


def enumerate_objects(max_edges: int, max_points: int) -> list[PerObject]:
    """All surjections with n <= max_points and k - 1 <= max_edges,
    ordered by (n, values)."""
    out = []
    for n in range(1, max_points + 1):
        for values in _surjections(n, min(n, max_edges + 1)):
            out.append(PerObject(values))
    return out


def _surjections(n: int, kmax: int):
    """All tuples in {1..k}^n covering 1..k for some k <= kmax; the
    ranges used here are tiny, so the plain product filter is fine."""
    for values in itertools.product(range(1, min(n, kmax) + 1), repeat=n):
        k = max(values)
        if sorted(set(values)) == list(range(1, k + 1)):
            yield values
