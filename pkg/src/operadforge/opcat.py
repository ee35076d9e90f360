"""Flavor-generic object protocol, enumeration, and axiom sanity checks.

Every flavor provides the same structural interface: a graded object
with a finite set of "edges" (internal edges for graphs, block gaps for
surjections), elementary contractions indexed by connected edge subsets,
canonical forms for isomorphism classes, and virtual keys for classes
with the global leg order forgotten.  This module is the single place
that dispatches on the object kind; everything above it (towers, free
operads, cobar complexes) is flavor-blind.

Isomorphism witnesses are half-edge dicts for graphs and None for the
rigid surjection category (whose only isos are identities).
"""

from __future__ import annotations

import functools
import itertools
from typing import Iterable

from . import graphs, per
from .graphs import GGGRC, RTR, TR, WHE, DecoratedGraph
from .per import PER, PerObject

ALL_FLAVORS = (GGGRC, TR, RTR, WHE, PER)

Obj = DecoratedGraph | PerObject


def grade(x: Obj) -> int:
    return x.grade()


def edge_list(x: Obj) -> tuple:
    return x.edges()


def split(x: Obj, edge_subset: Iterable):
    if isinstance(x, PerObject):
        return per.contract(x, edge_subset)
    return graphs.contract(x, edge_subset)


def splits(x: Obj, proper: bool = False) -> list:
    """All elementary contractions of x; `proper` drops the full one
    (whose quotient has grade 0)."""
    if isinstance(x, PerObject):
        return per.admissible_splits(x, require_quotient_grade_ge_1=proper)
    return graphs.admissible_splits(x, require_quotient_grade_ge_1=proper)


def is_connected_edge_set(x: Obj, edge_subset) -> bool:
    if isinstance(x, PerObject):
        gaps = sorted(set(edge_subset))
        return bool(gaps) and \
            gaps == list(range(gaps[0], gaps[0] + len(gaps)))
    return graphs._span_is_connected(x, edge_subset)


def edge_ends(x: Obj, e) -> tuple:
    """Endpoints of an edge, as a pair of vertex ids.  For a surjection
    the i-th gap sits between blocks i and i+1."""
    if isinstance(x, PerObject):
        return (e, e + 1)
    return x.edge_endpoints(e)


@functools.lru_cache(maxsize=65536)
def canonical(x: Obj) -> tuple[Obj, dict | None]:
    """Canonical representative of the isomorphism class and a witness
    isomorphism x -> canonical (None stands for the identity)."""
    if isinstance(x, PerObject):
        return x, None
    form, iso = graphs.canonical_form(x)
    return form, iso


def automorphisms(x: Obj) -> list:
    if isinstance(x, PerObject):
        return [None]
    return graphs.automorphisms(x)


def vkey(x: Obj) -> tuple:
    """Canonical key of the virtual isomorphism class (leg order
    forgotten; everything else pinned)."""
    if isinstance(x, PerObject):
        return x.encode()
    return graphs.virtual_key(x)


def object_from_vkey(key: tuple) -> Obj:
    if key[0] == PER:
        return PerObject(key[1])
    return graphs.virtual_graph(key)


def is_terminal(x: Obj) -> bool:
    if isinstance(x, PerObject):
        return per.is_local_terminal(x)
    return graphs.is_local_terminal(x)


def is_chosen(x: Obj) -> bool:
    if isinstance(x, PerObject):
        return per.is_chosen_terminal(x)
    return graphs.is_chosen_terminal(x)


def edge_map(iso: dict | None, e):
    """Push an edge through an isomorphism witness."""
    if iso is None:
        return e
    return graphs.edge_image(iso, e)


def compose_iso(second: dict | None, first: dict | None) -> dict | None:
    if first is None:
        return second
    if second is None:
        return first
    return {h: second[v] for h, v in first.items()}


def invert_iso(iso: dict | None) -> dict | None:
    if iso is None:
        return None
    return {v: h for h, v in iso.items()}


def total_genus(x: Obj) -> int:
    """For ggGrc the modular genus b1 + sum of vertex genera; for other
    graph flavors just b1; for surjections 0."""
    if isinstance(x, PerObject):
        return 0
    g = x.b1()
    if x.genus is not None:
        g += sum(x.genus)
    return g


@functools.lru_cache(maxsize=None)
def _skeleton_min(nv: int, pairs: tuple) -> tuple:
    best = None
    for pi in itertools.permutations(range(nv)):
        cand = tuple(sorted(tuple(sorted((pi[a], pi[b]))) for a, b in pairs))
        if best is None or cand < best:
            best = cand
    return best


def math_key(x: Obj) -> tuple:
    """Edge-skeleton identity of x: flavor plus the underlying multigraph
    up to vertex relabeling (for surjections, just the block count).

    Tower shapes, interchange, and split enumeration only ever look at
    edge adjacency, so any edge-set computation whose inputs are uniform
    across shapes (dimension counts, homology profiles) is constant on a
    math_key class and may be cached by it.  Decoration-sensitive data
    (genus-dependent generators, per-shape relation switches) must not
    use this key.
    """
    if isinstance(x, PerObject):
        return (PER, x.k)
    pairs = tuple(x.edge_endpoints(e) for e in x.edges())
    return (x.flavor, x.n_vertices(), _skeleton_min(x.n_vertices(), pairs))


# -- enumeration --------------------------------------------------------------

def _skeletons(max_edges: int, max_b1: int) -> list[tuple[int, tuple]]:
    """Connected multigraph skeletons (n_vertices, sorted edge multiset)
    up to isomorphism, grown one edge at a time."""

    def canon(nv, edges):
        best = None
        for pi in itertools.permutations(range(nv)):
            cand = tuple(sorted(tuple(sorted((pi[a], pi[b])))
                                for a, b in edges))
            if best is None or cand < best:
                best = cand
        return (nv, best)

    level = {(1, ())}
    out = [(1, ())]
    for _ in range(max_edges):
        nxt = set()
        for nv, edges in level:
            grow_cycles = len(edges) - nv + 1 < max_b1
            if grow_cycles:
                for a in range(nv):
                    for b in range(a, nv):
                        nxt.add(canon(nv, tuple(sorted(edges + ((a, b),)))))
            for a in range(nv):
                # fresh vertex hanging off a (keeps b1 = 0 growth)
                nxt.add(canon(nv + 1, tuple(sorted(edges + ((a, nv),)))))
        out.extend(sorted(nxt))
        level = nxt
    return out


def _vertex_automorphisms(nv: int, edges: tuple) -> list[tuple[int, ...]]:
    """Vertex permutations preserving the edge multiset."""
    ems = sorted(edges)
    auts = []
    for pi in itertools.permutations(range(nv)):
        if sorted(tuple(sorted((pi[a], pi[b]))) for a, b in edges) == ems:
            auts.append(pi)
    return auts


def _skeleton_to_graph(flavor: str, nv: int, edges: tuple,
                       leg_at: tuple[int, ...],
                       genus: tuple[int, ...] | None,
                       directions: tuple[int, ...] | None = None,
                       leg_ori: tuple[str, ...] | None = None
                       ) -> DecoratedGraph:
    """Assemble a decorated graph from skeleton data.  Half-edges are
    numbered edge by edge then leg by leg; local orders are whatever the
    assembly produces (canonicalization follows anyway)."""
    stars: list[list[int]] = [[] for _ in range(nv)]
    involution = []
    ori: list[str] | None = [] if flavor in (RTR, WHE) else None
    h = 0
    for idx, (a, b) in enumerate(edges):
        stars[a].append(h)
        stars[b].append(h + 1)
        involution.extend([h + 1, h])
        if ori is not None:
            flip = directions is not None and directions[idx]
            ori.extend([graphs.IN, graphs.OUT] if flip
                       else [graphs.OUT, graphs.IN])
        h += 2
    legs = []
    for pos, v in enumerate(leg_at):
        stars[v].append(h)
        involution.append(h)
        legs.append(h)
        if ori is not None:
            ori.append(leg_ori[pos] if leg_ori is not None else graphs.IN)
        h += 1
    if ori is not None:
        for star in stars:
            star.sort(key=lambda x: ori[x] != graphs.OUT)
        legs.sort(key=lambda x: ori[x] != graphs.OUT)
    return DecoratedGraph(flavor, stars, involution, legs, genus, ori)


def iter_objects(flavor: str, max_edges: int, max_legs: int,
                 max_genus: int):
    """Stream one canonical object per isomorphism class within bounds.

    max_genus bounds the TOTAL genus b1 + sum of vertex genera (so it
    also caps b1 for the undecorated directed flavor); trees have b1 = 0
    and no genus to choose.  For surjections, max_legs bounds the domain
    size and max_edges bounds k - 1.  The orbit filters in _decorations
    keep exactly one candidate per class, so the stream never repeats
    (tests cross-check this against a dedup-everything sweep).
    """
    if flavor == PER:
        yield from per.enumerate_objects(max_edges, max_legs)
        return
    assert flavor in (GGGRC, TR, RTR, WHE)
    max_b1 = max_genus if flavor in (GGGRC, WHE) else 0
    for nv, edges in _skeletons(max_edges, max_b1):
        b1 = len(edges) - nv + 1
        if b1 > max_b1:
            continue
        if flavor in (TR, RTR) and b1 != 0:
            continue
        auts = _vertex_automorphisms(nv, edges)
        for cand in _decorations(flavor, nv, edges, max_legs,
                                 max_genus - b1, auts):
            yield canonical(cand)[0]


def enumerate_objects(flavor: str, max_edges: int, max_legs: int,
                      max_genus: int) -> list[Obj]:
    """iter_objects, materialized and sorted by canonical encoding."""
    found = {x.encode(): x
             for x in iter_objects(flavor, max_edges, max_legs, max_genus)}
    return [found[k] for k in sorted(found)]


def _decorations(flavor: str, nv: int, edges: tuple, max_legs: int,
                 genus_budget: int, auts: list[tuple[int, ...]]):
    """Yield decorated candidates, one per orbit of the skeleton's vertex
    automorphisms.  The orbit filter compares the complete decoration
    (legs, genus, directed-edge multiset) so that exactly one candidate
    per isomorphism class survives; the canonical-form dedup downstream
    is then belt and braces, not load-bearing."""
    if flavor in (GGGRC, TR):
        genus_opts: list[tuple[int, ...] | None]
        if flavor == GGGRC:
            genus_opts = [g for g in itertools.product(
                range(genus_budget + 1), repeat=nv) if sum(g) <= genus_budget]
        else:
            genus_opts = [None]
        for nl in range(0, max_legs + 1):
            for leg_at in itertools.product(range(nv), repeat=nl):
                for genus in genus_opts:
                    if _orbit_minimal(auts, edges, None, leg_at, genus):
                        yield _skeleton_to_graph(flavor, nv, edges,
                                                 leg_at, genus)
    elif flavor == RTR:
        for root in range(nv):
            dirs = _toward_root(nv, edges, root)
            for nl in range(0, max_legs):     # plus the root leg
                for leg_at in itertools.product(range(nv), repeat=nl):
                    full_legs = (root,) + leg_at
                    if _orbit_minimal(auts, edges, dirs, full_legs, None):
                        leg_ori = (graphs.OUT,) + (graphs.IN,) * nl
                        yield _skeleton_to_graph(RTR, nv, edges, full_legs,
                                                 None, dirs, leg_ori)
    elif flavor == WHE:
        ne = len(edges)
        loops = [i for i, (a, b) in enumerate(edges) if a == b]
        for directions in itertools.product((0, 1), repeat=ne):
            if any(directions[i] for i in loops):
                continue  # a flipped loop is the same object relabeled
            if any(edges[i] == edges[i + 1] and directions[i] > directions[i + 1]
                   for i in range(ne - 1)):
                continue  # normalize flags within parallel-edge groups
            for nl in range(0, max_legs + 1):
                for n_out in range(0, nl + 1):
                    leg_ori = (graphs.OUT,) * n_out + (graphs.IN,) * (nl - n_out)
                    for leg_at in itertools.product(range(nv), repeat=nl):
                        if _orbit_minimal(auts, edges, directions, leg_at,
                                          None, leg_ori):
                            yield _skeleton_to_graph(WHE, nv, edges, leg_at,
                                                     None, directions, leg_ori)


def _toward_root(nv: int, edges: tuple, root: int) -> tuple[int, ...]:
    """Direction flags orienting a tree's edges child-to-parent toward
    root: flag 0 means the first endpoint's half is the out half."""
    adj: dict[int, list[int]] = {v: [] for v in range(nv)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    parent = {root: None}
    frontier = [root]
    while frontier:
        v = frontier.pop()
        for w in adj[v]:
            if w not in parent:
                parent[w] = v
                frontier.append(w)
    return tuple(0 if parent[a] == b else 1 for a, b in edges)


def _decoration_key(pi, edges, directions, leg_at, genus, leg_ori):
    """The complete decoration transported along the vertex permutation
    pi, as a comparable key.  Directed edges are compared as a multiset
    of (sorted endpoints, flip-adjusted flag); loops always carry flag 0
    (their two halves are interchangeable by a relabeling)."""
    if directions is None:
        dedges = tuple(sorted(tuple(sorted((pi[a], pi[b])))
                              for a, b in edges))
    else:
        items = []
        for (a, b), d in zip(edges, directions):
            x, y = pi[a], pi[b]
            if x == y:
                items.append((x, y, 0))
            elif x <= y:
                items.append((x, y, d))
            else:
                items.append((y, x, 1 - d))
        dedges = tuple(sorted(items))
    moved_legs = tuple(pi[v] for v in leg_at)
    moved_genus = ()
    if genus is not None:
        mg = [0] * len(genus)
        for v, g in enumerate(genus):
            mg[pi[v]] = g
        moved_genus = tuple(mg)
    return (dedges, moved_legs, moved_genus,
            leg_ori if leg_ori is not None else ())


def _orbit_minimal(auts, edges, directions, leg_at, genus,
                   leg_ori=None) -> bool:
    ident = _decoration_key(range(len(auts[0])) if auts else (),
                            edges, directions, leg_at, genus, leg_ori)
    for pi in auts:
        if _decoration_key(pi, edges, directions, leg_at, genus,
                           leg_ori) < ident:
            return False
    return True


# -- finite axiom sanity checks ------------------------------------------------

def sanity_report(x: Obj) -> dict[str, bool]:
    """Finite spot checks of the category axioms on one object."""
    report = {}
    sp = splits(x)
    report["grading_additive"] = all(
        s.fiber.grade() + s.quotient.grade() == x.grade() for s in sp)
    report["fibers_nontrivial"] = all(s.fiber.grade() >= 1 for s in sp)
    report["terminal_iff_grade0"] = (is_terminal(x) == (x.grade() == 0))
    report["full_contraction_terminal"] = all(
        is_terminal(s.quotient)
        for s in sp if len(s.fiber_edges) == len(edge_list(x))) if sp else True
    report["identity_is_automorphism"] = True
    if not isinstance(x, PerObject):
        auts = automorphisms(x)
        report["identity_is_automorphism"] = any(
            all(m[h] == h for h in range(x.n)) for m in auts)
    form, iso = canonical(x)
    report["canonical_idempotent"] = canonical(form)[0] == form
    if x.grade() == 0:
        report["terminal_class_has_chosen_form"] = is_chosen(canonical(x)[0])
    return report


def sanity_sweep(objs: Iterable[Obj]) -> dict[str, bool]:
    """Conjunction of per-object reports; any named check that fails
    anywhere reports False."""
    agg: dict[str, bool] = {}
    for x in objs:
        for name, ok in sanity_report(x).items():
            agg[name] = agg.get(name, True) and ok
    return agg
