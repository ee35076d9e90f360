"""Tower classes: the combinatorial index of free-operad components.

A height-k tower on an object X is a chain of k elementary contractions
ending at the chosen terminal.  Concretely it is an ordered partition
(B1, ..., Bk) of the edge set: B1 ... B_{k-1} are contracted one block
at a time and the closing step collapses whatever Bk is left, so the
fiber sequence is (span of B1, span of B2 in the first quotient, ...,
last quotient).  Each Bi with i < k must have connected span in the
partially contracted object where it is consumed; the final block is
exempt, the last quotient being connected outright.

Two towers are isomorphic exactly when one can be turned into the other
by repeatedly interchanging adjacent contraction steps whose spans are
vertex-disjoint in the partially contracted object at that point.  Two
caveats, both load-bearing:

  * the closing step never takes part in an interchange -- its fiber is
    the whole remaining object, which meets everything, and swapping it
    with the previous step changes which object the tower ends on;
  * disjointness is tested stage by stage, not in X itself: with four
    or more edges an earlier contraction can merge the endpoints of two
    later blocks.

Classes are represented by their lexicographically smallest member, so
every enumeration here is deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from . import opcat

# an ordered partition of the edge set; each block a sorted tuple
Shape = tuple


@dataclass(frozen=True)
class EdgeOrderClass:
    """A binary tower class, recorded as its minimal contraction order."""

    base: object
    order: tuple

    def shape(self) -> Shape:
        return tuple((e,) for e in self.order)


@dataclass(frozen=True)
class TowerClass:
    """A realized tower: shape plus the fiber sequence it produces.

    `splits` holds the height-1 contractions actually performed (one per
    block except the last); `fiber_keys` are the virtual keys of the
    fiber sequence, final quotient included.  The final block is empty
    only for the improper height-2 tower, whose last entry is terminal.
    """

    base: object
    shape: Shape
    fiber_keys: tuple
    splits: tuple

    @property
    def height(self) -> int:
        return len(self.shape)


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self):
        self.parent: dict = {}

    def find(self, v):
        p = self.parent
        while v in p:           # roots are absent from the map
            v = p[v]
        return v

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb

    def copy(self) -> "_UnionFind":
        other = _UnionFind.__new__(_UnionFind)
        other.parent = dict(self.parent)
        return other


def _ends_map(x) -> dict:
    return {e: opcat.edge_ends(x, e) for e in opcat.edge_list(x)}


def _block_connected(uf: _UnionFind, ends: dict, block) -> bool:
    """Connectivity of the block's span in the contraction `uf` encodes."""
    sub = _UnionFind()
    for e in block:
        u, v = ends[e]
        sub.union(uf.find(u), uf.find(v))
    comps = {sub.find(uf.find(v)) for e in block for v in ends[e]}
    return len(comps) == 1


def _span_components(uf: _UnionFind, ends: dict, block) -> set:
    return {uf.find(v) for e in block for v in ends[e]}


def all_tower_shapes(x, k: int) -> list[Shape]:
    """Every stage-valid ordered partition of edg(x) into k nonempty
    blocks, before grouping into interchange classes."""
    edges = opcat.edge_list(x)
    n = len(edges)
    if n == 0:
        return [()] if k == 0 else []
    if not 1 <= k <= n:
        return []
    ends = _ends_map(x)
    out: list[Shape] = []

    def rec(remaining: tuple, uf: _UnionFind, acc: tuple):
        slots = k - len(acc)
        if slots == 1:
            out.append(acc + (remaining,))
            return
        for size in range(1, len(remaining) - (slots - 1) + 1):
            for block in itertools.combinations(remaining, size):
                if not _block_connected(uf, ends, block):
                    continue
                uf2 = uf.copy()
                for e in block:
                    uf2.union(*ends[e])
                chosen = set(block)
                rest = tuple(e for e in remaining if e not in chosen)
                rec(rest, uf2, acc + (block,))

    rec(edges, _UnionFind(), ())
    return out


def interchange_neighbors(x, shape: Shape) -> list[Shape]:
    """Shapes one admissible interchange away from `shape`."""
    ends = _ends_map(x)
    k = len(shape)
    out = []
    uf = _UnionFind()
    for u in range(k - 2):          # the final block is pinned
        if u > 0:
            for e in shape[u - 1]:
                uf.union(*ends[e])
        left = _span_components(uf, ends, shape[u])
        right = _span_components(uf, ends, shape[u + 1])
        if not left & right:
            out.append(shape[:u] + (shape[u + 1], shape[u]) + shape[u + 2:])
    return out


def _class_partition(x, k: int) -> dict[Shape, list[Shape]]:
    """All height-k shapes grouped into classes, keyed by minimal member."""
    seen: set = set()
    classes: dict[Shape, list[Shape]] = {}
    for s in all_tower_shapes(x, k):
        if s in seen:
            continue
        todo = [s]
        seen.add(s)
        members = []
        while todo:
            cur = todo.pop()
            members.append(cur)
            for nb in interchange_neighbors(x, cur):
                if nb not in seen:
                    seen.add(nb)
                    todo.append(nb)
        members.sort()
        classes[members[0]] = members
    return classes


@lru_cache(maxsize=None)
def tower_classes(x, k: int) -> tuple[Shape, ...]:
    """Minimal representative of every height-k tower class, sorted."""
    return tuple(sorted(_class_partition(x, k)))


@lru_cache(maxsize=None)
def class_of(x, shape: Shape) -> tuple[Shape, tuple[int, ...]]:
    """Normalize `shape` to its class representative.

    Returns (rep, perm) with rep[i] == shape[perm[i]].  Blocks within a
    shape are pairwise distinct, so perm does not depend on the path of
    interchanges; the caller converts it into a Koszul sign with its own
    degree bookkeeping.
    """
    assert tuple(sorted(e for b in shape for e in b)) == \
        tuple(sorted(opcat.edge_list(x))), "shape must partition the edges"
    seen = {shape}
    todo = [shape]
    while todo:
        cur = todo.pop()
        for nb in interchange_neighbors(x, cur):
            if nb not in seen:
                seen.add(nb)
                todo.append(nb)
    rep = min(seen)
    perm = tuple(shape.index(b) for b in rep)
    return rep, perm


def binary_tower_classes(x) -> tuple[EdgeOrderClass, ...]:
    """Classes of full contraction orders (every block a single edge)."""
    reps = tower_classes(x, opcat.grade(x))
    return tuple(EdgeOrderClass(x, tuple(b[0] for b in rep))
                 for rep in reps)


@lru_cache(maxsize=None)
def realize_tower(x, shape: Shape) -> TowerClass:
    """Run the contractions of `shape` and record fibers and splits."""
    if shape == ():
        return TowerClass(x, (), (), ())
    current = x
    emap = {e: e for e in opcat.edge_list(x)}
    splits = []
    keys = []
    for block in shape[:-1]:
        s = opcat.split(current, sorted(emap[e] for e in block))
        splits.append(s)
        keys.append(opcat.vkey(s.fiber))
        gone = set(s.fiber_edges)
        emap = {e: s.quotient_edge(c) for e, c in emap.items()
                if c not in gone}
        current = s.quotient
    keys.append(opcat.vkey(current))
    assert len(emap) == len(shape[-1])
    return TowerClass(x, shape, tuple(keys), tuple(splits))


def height2_classes(x, proper: bool = True) -> tuple[TowerClass, ...]:
    """One class per elementary contraction; at height 2 no interchange
    is possible, so splits and classes coincide.  With proper=False the
    full contraction appears as the degenerate tower whose final entry
    is terminal."""
    edges = opcat.edge_list(x)
    out = []
    for s in opcat.splits(x, proper=proper):
        first = tuple(sorted(s.fiber_edges))
        gone = set(s.fiber_edges)
        last = tuple(e for e in edges if e not in gone)
        keys = (opcat.vkey(s.fiber), opcat.vkey(s.quotient))
        out.append(TowerClass(x, (first, last), keys, (s,)))
    return tuple(sorted(out, key=lambda t: t.shape))


def general_tower_classes(x, k: int) -> tuple[TowerClass, ...]:
    """All height-k classes, realized.  Every fiber has grade >= 1."""
    return tuple(realize_tower(x, rep) for rep in tower_classes(x, k))


def graft(s, fiber_shape: Shape, quotient_shape: Shape) -> Shape:
    """Concatenate a tower of s.fiber with a tower of s.quotient into a
    tower of s.source, fiber steps first.  The fiber sequence of the
    result is the two fiber sequences concatenated in the same order."""
    from_f = {s.fiber_edge(e): e for e in s.fiber_edges}
    gone = set(s.fiber_edges)
    from_q = {s.quotient_edge(e): e
              for e in opcat.edge_list(s.source) if e not in gone}
    fpart = tuple(tuple(sorted(from_f[e] for e in b)) for b in fiber_shape)
    qpart = tuple(tuple(sorted(from_q[e] for e in b)) for b in quotient_shape)
    return fpart + qpart
