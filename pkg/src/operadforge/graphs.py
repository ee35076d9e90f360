"""Decorated graphs and their elementary contractions.

A graph is a finite set of half-edges 0..n-1, an involution pairing them
(fixed points are legs), a partition of the half-edges into vertices where
each vertex carries a linear *local order* on its half-edges, and a global
linear order on the legs.  Flavors add decorations and constraints:

  ggGrc  connected undirected graphs, a genus >= 0 at every vertex;
  Tr     connected undirected trees (no genus);
  RTr    rooted trees: every half-edge is directed, each vertex has exactly
         one outgoing half-edge sitting first in its local order, and the
         one outgoing leg is the root;
  Whe    connected directed graphs (wheels allowed): at every vertex the
         outgoing half-edges precede the incoming ones in the local order,
         and the global leg order lists outgoing legs first.

Isomorphisms are half-edge bijections commuting with the involution,
inducing a bijection of vertices, fixing every leg's global position and
preserving genus and direction.  Local orders are NOT preserved: they are
extra decoration distinguishing isomorphic objects, and the isomorphisms
that do preserve them are exactly the quasibijections.  Graphs with
different local orders at some vertex are therefore isomorphic but not
equal; a one-vertex edgeless graph whose local order agrees with the leg
order is the chosen terminal of its class.

The grade of a graph is its number of internal edges.  Contracting a
connected set of internal edges is the elementary morphism of the theory;
`contract` builds both its fiber and its quotient deterministically so
that iterated contractions literally compose.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

GGGRC = "ggGrc"
TR = "Tr"
RTR = "RTr"
WHE = "Whe"
GRAPH_FLAVORS = (GGGRC, TR, RTR, WHE)

OUT = "o"
IN = "i"

Edge = tuple[int, int]  # (min half, max half) of an internal edge


class DecoratedGraph:
    """Immutable decorated graph.  See the module docstring for the model."""

    __slots__ = ("flavor", "n", "involution", "vertices", "legs", "genus",
                 "ori", "_vertex_of", "_hash")

    def __init__(self, flavor: str,
                 vertices: Sequence[Sequence[int]],
                 involution: Sequence[int],
                 legs: Sequence[int],
                 genus: Sequence[int] | None = None,
                 ori: Sequence[str] | None = None):
        vertices = tuple(tuple(v) for v in vertices)
        involution = tuple(involution)
        legs = tuple(legs)
        n = len(involution)
        object.__setattr__(self, "flavor", flavor)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "involution", involution)
        object.__setattr__(self, "legs", legs)
        object.__setattr__(self, "genus",
                           tuple(genus) if genus is not None else None)
        object.__setattr__(self, "ori",
                           tuple(ori) if ori is not None else None)
        vertex_of = {}
        for vi, star in enumerate(vertices):
            for h in star:
                assert h not in vertex_of, "half-edge %d at two vertices" % h
                vertex_of[h] = vi
        object.__setattr__(self, "_vertex_of", vertex_of)
        object.__setattr__(self, "_hash", None)
        self._validate()

    def __setattr__(self, name, value):
        raise AttributeError("DecoratedGraph is immutable")

    # -- structure ---------------------------------------------------------

    def partner(self, h: int) -> int:
        return self.involution[h]

    def vertex_of(self, h: int) -> int:
        return self._vertex_of[h]

    def is_leg(self, h: int) -> bool:
        return self.involution[h] == h

    def edges(self) -> tuple[Edge, ...]:
        """Internal edges as sorted (low, high) half-edge pairs, sorted."""
        seen = []
        for h, p in enumerate(self.involution):
            if p > h:
                seen.append((h, p))
        return tuple(seen)

    def grade(self) -> int:
        return len(self.edges())

    def n_vertices(self) -> int:
        return len(self.vertices)

    def b1(self) -> int:
        """First Betti number |edges| - |vertices| + 1 (graph connected)."""
        return self.grade() - self.n_vertices() + 1

    def edge_endpoints(self, e: Edge) -> tuple[int, int]:
        return self.vertex_of(e[0]), self.vertex_of(e[1])

    # -- validation --------------------------------------------------------

    def _validate(self):
        assert self.flavor in GRAPH_FLAVORS, "unknown flavor %r" % self.flavor
        n = self.n
        assert sorted(self._vertex_of) == list(range(n)), \
            "vertices must partition the half-edges 0..%d" % (n - 1)
        for h, p in enumerate(self.involution):
            assert 0 <= p < n and self.involution[p] == h, \
                "involution broken at half-edge %d" % h
        fixed = tuple(h for h in range(n) if self.involution[h] == h)
        assert sorted(self.legs) == sorted(fixed), \
            "legs %r must list the involution's fixed points %r" % (
                self.legs, fixed)
        assert len(self.vertices) >= 1, "graphs are nonempty"
        assert self._is_connected(), "graphs must be connected"
        if self.flavor == GGGRC:
            assert self.genus is not None and \
                len(self.genus) == len(self.vertices), "ggGrc needs a genus per vertex"
            assert all(g >= 0 for g in self.genus), "genus must be >= 0"
            assert self.ori is None, "ggGrc graphs are undirected"
        elif self.flavor == TR:
            assert self.genus is None and self.ori is None
            assert self.grade() == self.n_vertices() - 1, \
                "a tree has |edges| = |vertices| - 1"
        elif self.flavor in (RTR, WHE):
            assert self.genus is None
            assert self.ori is not None and len(self.ori) == n, \
                "%s needs an orientation per half-edge" % self.flavor
            assert all(o in (OUT, IN) for o in self.ori)
            for lo, hi in self.edges():
                assert {self.ori[lo], self.ori[hi]} == {OUT, IN}, \
                    "edge (%d, %d) must pair an out half with an in half" % (lo, hi)
            if self.flavor == RTR:
                assert self.grade() == self.n_vertices() - 1, \
                    "a rooted tree is a tree"
                for vi, star in enumerate(self.vertices):
                    outs = [h for h in star if self.ori[h] == OUT]
                    assert len(outs) == 1 and star and star[0] == outs[0], \
                        "vertex %d must have its single out half first" % vi
                out_legs = [h for h in self.legs if self.ori[h] == OUT]
                assert len(out_legs) == 1, "a rooted tree has one root leg"
                assert self.legs[0] == out_legs[0], \
                    "the root leg comes first in the global order"
            else:
                for vi, star in enumerate(self.vertices):
                    tail = list(itertools.dropwhile(
                        lambda h: self.ori[h] == OUT, star))
                    assert all(self.ori[h] == IN for h in tail), \
                        "vertex %d must list out halves before in halves" % vi
                split = [self.ori[h] for h in self.legs]
                assert split == sorted(split, key=lambda o: o != OUT), \
                    "out legs must precede in legs in the global order"

    def _is_connected(self) -> bool:
        if not self.vertices:
            return False
        seen = {0}
        frontier = [0]
        while frontier:
            vi = frontier.pop()
            for h in self.vertices[vi]:
                p = self.involution[h]
                if p != h:
                    wi = self.vertex_of(p)
                    if wi not in seen:
                        seen.add(wi)
                        frontier.append(wi)
        return len(seen) == len(self.vertices)

    # -- identity ----------------------------------------------------------

    def encode(self) -> tuple:
        """Total, comparison-friendly encoding of the object (not the class)."""
        return (self.flavor, self.n, self.vertices, self.involution,
                self.legs, self.genus if self.genus is not None else (),
                self.ori if self.ori is not None else ())

    def __eq__(self, other):
        return (isinstance(other, DecoratedGraph)
                and self.encode() == other.encode())

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self.encode()))
        return self._hash

    def __repr__(self):
        extra = ""
        if self.genus is not None:
            extra += ", genus=%r" % (self.genus,)
        if self.ori is not None:
            extra += ", ori=%s" % "".join(self.ori)
        return "DecoratedGraph(%s, v=%r, inv=%r, legs=%r%s)" % (
            self.flavor, self.vertices, self.involution, self.legs, extra)

    # -- serialization -----------------------------------------------------

    def to_json(self) -> str:
        data: dict = {
            "flavor": self.flavor,
            "half_edges": list(range(self.n)),
            "involution": [[lo, hi] for lo, hi in self.edges()],
            "vertices": [list(v) for v in self.vertices],
            "legs": list(self.legs),
        }
        if self.genus is not None:
            data["genus"] = {str(i): g for i, g in enumerate(self.genus)}
        if self.ori is not None:
            data["orientation"] = {str(h): o for h, o in enumerate(self.ori)}
        return json.dumps(data, sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json(text: str) -> "DecoratedGraph":
        data = json.loads(text)
        names = list(data["half_edges"])
        index = {h: i for i, h in enumerate(names)}
        assert len(index) == len(names), "repeated half-edge names"
        involution = list(range(len(names)))
        for a, b in data["involution"]:
            involution[index[a]] = index[b]
            involution[index[b]] = index[a]
        vertices = [[index[h] for h in star] for star in data["vertices"]]
        legs = [index[h] for h in data["legs"]]
        genus = None
        if "genus" in data:
            genus = [0] * len(vertices)
            for key, g in data["genus"].items():
                genus[int(key)] = g
        ori = None
        if "orientation" in data:
            ori = [OUT] * len(names)
            for key, o in data["orientation"].items():
                name = int(key) if isinstance(names[0], int) else key
                ori[index[name]] = o
        return DecoratedGraph(data["flavor"], vertices, involution, legs,
                              genus, ori)


def relabel(g: DecoratedGraph, new_name: dict[int, int],
            vertex_order: Sequence[int],
            star_orders: Sequence[Sequence[int]]) -> DecoratedGraph:
    """Apply a half-edge renaming with an explicit target layout.

    vertex_order lists source vertex indices in target order; star_orders
    lists, per target vertex, the source half-edges in target local order.
    """
    involution = [0] * g.n
    for h, p in enumerate(g.involution):
        involution[new_name[h]] = new_name[p]
    vertices = tuple(tuple(new_name[h] for h in star) for star in star_orders)
    legs = tuple(new_name[h] for h in g.legs)
    genus = None
    if g.genus is not None:
        genus = tuple(g.genus[vi] for vi in vertex_order)
    ori = None
    if g.ori is not None:
        ori = [OUT] * g.n
        for h in range(g.n):
            ori[new_name[h]] = g.ori[h]
    return DecoratedGraph(g.flavor, vertices, involution, legs, genus, ori)


# -- canonical form ---------------------------------------------------------

def _wl_colors(g: DecoratedGraph) -> list[int]:
    """Iterated neighborhood refinement: an isomorphism-invariant color
    per vertex (dense ints).  Used to order and prune the canonical
    labeling search; any refinement of the trivial coloring is sound."""
    nv = len(g.vertices)
    leg_pos = {h: i for i, h in enumerate(g.legs)}

    def initial(v):
        star = g.vertices[v]
        legs = tuple(sorted(leg_pos[h] for h in star
                            if g.involution[h] == h))
        gen = g.genus[v] if g.genus is not None else 0
        oris = (tuple(sorted(g.ori[h] for h in star))
                if g.ori is not None else ())
        return (len(star), gen, legs, oris)

    keys = [initial(v) for v in range(nv)]
    palette = sorted(set(keys))
    col = [palette.index(k) for k in keys]
    for _ in range(nv):
        newkeys = []
        for v in range(nv):
            neighbors = sorted(
                (col[self_or(g, h)],
                 g.ori[h] if g.ori is not None else "")
                for h in g.vertices[v] if g.involution[h] != h)
            newkeys.append((col[v], tuple(neighbors)))
        palette = sorted(set(newkeys))
        newcol = [palette.index(k) for k in newkeys]
        if newcol == col:
            break
        col = newcol
    return col


def self_or(g: DecoratedGraph, h: int) -> int:
    return g.vertex_of(g.involution[h])


def _assignment_search(g: DecoratedGraph, collect_all: bool):
    """Backtracking search over relabelings minimizing a per-vertex
    signature sequence.

    A relabeling is a vertex order plus a local order per vertex; new
    names are handed out consecutively.  Each placed vertex contributes
    a signature (star size, genus, refinement color, then one entry per
    half-edge: leg position / named partner / partner's vertex color),
    and the minimal signature sequence determines the canonical graph:
    every edge is pinned by a named-partner entry on its later side, so
    equal signatures force equal relabeled graphs.

    Local orders are derived, not searched: entries sort increasingly
    (legs by position, assigned partners by name, intra-star loop pairs,
    then halves with unplaced partners by partner color), and only
    genuinely ambiguous spots branch: same-color unplaced partners
    always, loop arrangements only when collecting all witnesses (they
    change the map, never the signature).  Directed vertices order out
    halves before in halves (the flavor constraint); a directed loop at
    a vertex falls back to brute permutations within each side.
    """
    nv = len(g.vertices)
    leg_pos = {h: i for i, h in enumerate(g.legs)}
    colors = _wl_colors(g)
    best_sig: list = [None]
    best_out: list = []

    def entry(h, name_of):
        p = g.involution[h]
        if p == h:
            e = (0, leg_pos[h])
        elif p in name_of:
            e = (1, name_of[p])
        else:
            e = (2, colors[self_or(g, h)])
        if g.ori is not None:
            e = e + (g.ori[h],)
        return e

    def star_arrangements(star, name_of):
        """Yield candidate local orders for one star (see the docstring)."""
        if g.ori is not None:
            outs = [h for h in star if g.ori[h] == OUT]
            ins = [h for h in star if g.ori[h] == IN]
            has_loop = any(g.involution[h] in star and g.involution[h] != h
                           for h in star)
            if has_loop:
                for po in itertools.permutations(outs):
                    for pi in itertools.permutations(ins):
                        yield list(po) + list(pi)
                return
            for po in _side_arrangements(outs, star, name_of):
                for pi in _side_arrangements(ins, star, name_of):
                    yield po + pi
            return
        yield from _side_arrangements(list(star), star, name_of)

    def _side_arrangements(halves, star, name_of):
        legs = sorted((h for h in halves if g.involution[h] == h),
                      key=lambda h: leg_pos[h])
        assigned = sorted((h for h in halves if g.involution[h] != h
                           and g.involution[h] in name_of),
                          key=lambda h: name_of[g.involution[h]])
        loop_halves = [h for h in halves if g.involution[h] in star
                       and g.involution[h] != h
                       and g.involution[h] not in name_of]
        pending = [h for h in halves if g.involution[h] != h
                   and g.involution[h] not in name_of
                   and g.involution[h] not in star]
        loop_pairs = sorted({(min(h, g.involution[h]), max(h, g.involution[h]))
                             for h in loop_halves})
        if collect_all:
            loop_arrs = []
            for perm in itertools.permutations(loop_pairs):
                for flips in itertools.product((0, 1), repeat=len(perm)):
                    arr = []
                    for (a, b), f in zip(perm, flips):
                        arr.extend((b, a) if f else (a, b))
                    loop_arrs.append(arr)
            loop_arrs = loop_arrs or [[]]
        else:
            loop_arrs = [[x for pair in loop_pairs for x in pair]]
        # group unplaced-partner halves by partner color; branch within
        groups: dict[int, list[int]] = {}
        for h in pending:
            groups.setdefault(colors[self_or(g, h)], []).append(h)
        group_perms = [itertools.permutations(groups[c])
                       for c in sorted(groups)]
        for loops in loop_arrs:
            for combo in itertools.product(*group_perms):
                tail = [h for block in combo for h in block]
                yield legs + assigned + loops + tail

    def search(vertex_order, star_orders, name_of, partial):
        if best_sig[0] is not None and partial > best_sig[0][:len(partial)]:
            return
        if len(vertex_order) == nv:
            if best_sig[0] is None or partial < best_sig[0]:
                best_sig[0] = list(partial)
                best_out.clear()
                best_out.append((tuple(vertex_order), tuple(star_orders)))
            elif partial == best_sig[0] and collect_all:
                best_out.append((tuple(vertex_order), tuple(star_orders)))
            return
        base = sum(len(s) for s in star_orders)
        placed = set(vertex_order)
        candidates = sorted(
            (v for v in range(nv) if v not in placed),
            key=lambda v: (len(g.vertices[v]),
                           g.genus[v] if g.genus is not None else 0,
                           colors[v]))
        for sv in candidates:
            star = g.vertices[sv]
            head = (len(star),
                    g.genus[sv] if g.genus is not None else 0,
                    colors[sv])
            if best_sig[0] is not None:
                probe = partial + [head]
                if probe > best_sig[0][:len(probe)]:
                    continue
            for order in star_arrangements(star, name_of):
                nm = dict(name_of)
                for i, h in enumerate(order):
                    nm[h] = base + i
                sig = head + tuple(entry(h, nm) for h in order)
                search(vertex_order + [sv], star_orders + [tuple(order)],
                       nm, partial + [sig])

    search([], [], {}, [])
    return best_out


def canonical_form(g: DecoratedGraph) -> tuple[DecoratedGraph, dict[int, int]]:
    """Canonical representative of g's isomorphism class, with a witness.

    Returns (canonical, iso) where iso maps g's half-edges to canonical's
    and is an isomorphism in the category (it need not preserve local
    orders).  Idempotent: the canonical graph canonicalizes to itself
    under the identity encoding.  Two graphs are isomorphic iff their
    canonical forms are equal.
    """
    solutions = _assignment_search(g, collect_all=False)
    vertex_order, star_orders = solutions[0]
    name_of = {}
    counter = 0
    for star in star_orders:
        for h in star:
            name_of[h] = counter
            counter += 1
    return relabel(g, name_of, vertex_order, star_orders), name_of


def automorphisms(g: DecoratedGraph) -> list[dict[int, int]]:
    """All isomorphisms g -> g, as half-edge maps.  Contains the identity;
    closed under composition and inverse (it is the automorphism group)."""
    solutions = _assignment_search(g, collect_all=True)
    maps = []
    for vertex_order, star_orders in solutions:
        name_of = {}
        counter = 0
        for star in star_orders:
            for h in star:
                name_of[h] = counter
                counter += 1
        maps.append(name_of)
    base = maps[0]
    inv_base = {v: k for k, v in base.items()}
    group = []
    seen = set()
    for m in maps:
        auto = {h: inv_base[m[h]] for h in range(g.n)}
        key = tuple(auto[h] for h in range(g.n))
        if key not in seen:
            seen.add(key)
            group.append(auto)
    return group


def is_isomorphic(a: DecoratedGraph, b: DecoratedGraph) -> bool:
    return (a.flavor == b.flavor
            and canonical_form(a)[0] == canonical_form(b)[0])


_VIRTUAL_CACHE: dict[tuple, tuple] = {}


def virtual_key(g: DecoratedGraph) -> tuple:
    """Canonical key of g's virtual isomorphism class (global leg order
    forgotten; for directed flavors legs still may not change direction,
    and the root of a rooted tree stays the root)."""
    enc = g.encode()
    hit = _VIRTUAL_CACHE.get(enc)
    if hit is not None:
        return hit
    best = None
    for legs in _leg_reorderings(g):
        regraded = DecoratedGraph(g.flavor, g.vertices, g.involution,
                                  legs, g.genus, g.ori)
        cand = canonical_form(regraded)[0].encode()
        if best is None or cand < best:
            best = cand
    _VIRTUAL_CACHE[enc] = best
    return best


def _leg_reorderings(g: DecoratedGraph) -> Iterable[tuple[int, ...]]:
    if g.flavor in (RTR, WHE):
        outs = [h for h in g.legs if g.ori[h] == OUT]
        ins = [h for h in g.legs if g.ori[h] == IN]
        for po in itertools.permutations(outs):
            for pi in itertools.permutations(ins):
                yield po + pi
    else:
        yield from itertools.permutations(g.legs)


def virtual_graph(key: tuple) -> DecoratedGraph:
    """Rebuild the canonical representative graph from a virtual key."""
    flavor, _, vertices, involution, legs, genus, ori = key
    return DecoratedGraph(flavor, vertices, involution, legs,
                          genus if flavor == GGGRC else None,
                          ori if flavor in (RTR, WHE) else None)


# -- terminal objects and corollas ------------------------------------------

def is_local_terminal(g: DecoratedGraph) -> bool:
    """Local terminal objects are exactly the grade-0 (edgeless) graphs."""
    return g.grade() == 0


def is_chosen_terminal(g: DecoratedGraph) -> bool:
    """The chosen terminal of its class: edgeless with the local order
    agreeing with the global leg order."""
    return (g.grade() == 0 and len(g.vertices) == 1
            and g.vertices[0] == g.legs)


def corolla(flavor: str, n_legs: int, genus: int = 0,
            local: Sequence[int] | None = None,
            n_out: int = 1) -> DecoratedGraph:
    """One-vertex edgeless graph.  local permutes the star (default: the
    chosen corolla, local order = global order).  For Whe, n_out of the
    legs are outgoing; for RTr the single out leg comes first."""
    star = tuple(local) if local is not None else tuple(range(n_legs))
    involution = list(range(n_legs))
    legs = tuple(range(n_legs))
    if flavor == GGGRC:
        return DecoratedGraph(GGGRC, [star], involution, legs,
                              genus=[genus])
    if flavor == TR:
        return DecoratedGraph(TR, [star], involution, legs)
    if flavor == RTR:
        ori = [OUT] + [IN] * (n_legs - 1)
        return DecoratedGraph(RTR, [star], involution, legs, ori=ori)
    if flavor == WHE:
        ori = [OUT] * n_out + [IN] * (n_legs - n_out)
        return DecoratedGraph(WHE, [star], involution, legs, ori=ori)
    raise ValueError("unknown flavor %r" % flavor)


# -- elementary contractions -------------------------------------------------

@dataclass(frozen=True)
class ElementarySplit:
    """An elementary contraction of `source`: the connected edge set
    `fiber_edges` collapses to the vertex `vertex_index` of `quotient`,
    and `fiber` is the collapsed subgraph with the cut half-edges as legs
    (ordered the same way as the collapsed vertex's local order in the
    quotient).  `rename` maps each surviving source half-edge to its
    quotient name; `fiber_rename` maps each source half-edge sitting at a
    collapsed vertex to its fiber name.  Both renames preserve relative
    order, so a sequence of contractions composes to the contraction of
    the union whenever that union is itself connected."""

    source: DecoratedGraph
    fiber_edges: tuple[Edge, ...]
    fiber: DecoratedGraph
    quotient: DecoratedGraph
    vertex_index: int
    rename: dict[int, int]
    fiber_rename: dict[int, int]

    def __post_init__(self):
        assert self.source.grade() == \
            self.quotient.grade() + self.fiber.grade(), \
            "grading must be conserved across an elementary morphism"

    def quotient_edge(self, e: Edge) -> Edge:
        """Image in the quotient of a surviving source edge."""
        return edge_image(self.rename, e)

    def fiber_edge(self, e: Edge) -> Edge:
        """Name in the fiber of a contracted source edge."""
        return edge_image(self.fiber_rename, e)


def _span_is_connected(g: DecoratedGraph, edge_set: Iterable[Edge]) -> bool:
    edge_set = list(edge_set)
    if not edge_set:
        return False
    verts = {g.vertex_of(h) for e in edge_set for h in e}
    adj = {v: set() for v in verts}
    for lo, hi in edge_set:
        a, b = g.vertex_of(lo), g.vertex_of(hi)
        adj[a].add(b)
        adj[b].add(a)
    start = next(iter(verts))
    seen = {start}
    frontier = [start]
    while frontier:
        v = frontier.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return seen == verts


def _induced_subgraph(g: DecoratedGraph, vert_set: list[int],
                      edge_set: set[Edge]
                      ) -> tuple[DecoratedGraph, dict[int, int]]:
    """Fiber graph: the given vertices with their full stars; pairs inside
    edge_set stay edges, every other half becomes a leg.  Legs are ordered
    by source vertex order then local position (the quotient's collapsed
    vertex lists them the same way)."""
    halves = [h for vi in vert_set for h in g.vertices[vi]]
    rename = {h: i for i, h in enumerate(halves)}
    involution = list(range(len(halves)))
    in_edges = {h for e in edge_set for h in e}
    for h in halves:
        if h in in_edges:
            involution[rename[h]] = rename[g.involution[h]]
    vertices = [tuple(rename[h] for h in g.vertices[vi]) for vi in vert_set]
    # legs sorted by source name: order-preserving renames make this
    # ordering stable under composing contractions (see `contract`)
    legs = tuple(rename[h] for h in sorted(halves) if h not in in_edges)
    genus = None
    if g.genus is not None:
        genus = [g.genus[vi] for vi in vert_set]
    ori = None
    if g.ori is not None:
        ori = [OUT] * len(halves)
        for h in halves:
            ori[rename[h]] = g.ori[h]
    if g.flavor in (RTR, WHE):
        # fiber legs: outgoing first, keeping the induced relative order
        legs = tuple(sorted(legs, key=lambda h: (ori[h] != OUT,
                                                 legs.index(h))))
    return (DecoratedGraph(g.flavor, vertices, involution, legs, genus, ori),
            rename)


def contract(g: DecoratedGraph, edge_set: Iterable[Edge]) -> ElementarySplit:
    """Contract a connected set of internal edges of g.

    The quotient keeps every untouched vertex (star untouched); the
    collapsed vertex sits at the position of the first collapsed source
    vertex and its local order lists the surviving half-edges of the
    collapsed vertices sorted by source name (for directed flavors: out
    halves first, by name within each block).  All renames preserve
    relative name order, so contracting B1 and then the image of B2
    yields bit for bit the same quotient as contracting B1 | B2 at once
    whenever B1 | B2 is connected.
    """
    edge_set = {(min(e), max(e)) for e in edge_set}
    all_edges = set(g.edges())
    assert edge_set <= all_edges, "can only contract internal edges of g"
    assert _span_is_connected(g, edge_set), \
        "the contracted edge set must span a connected subgraph"
    dead = {h for e in edge_set for h in e}
    fiber_vertices = sorted({g.vertex_of(h) for h in dead})
    fiber, fiber_rename = _induced_subgraph(g, fiber_vertices, edge_set)

    keep = [h for h in range(g.n) if h not in dead]
    rename = {h: i for i, h in enumerate(keep)}
    new_vertices = []
    new_genus = [] if g.genus is not None else None
    collapsed_at = None
    fiber_set = set(fiber_vertices)
    for vi, star in enumerate(g.vertices):
        if vi in fiber_set:
            if collapsed_at is None:
                collapsed_at = len(new_vertices)
                survivors = sorted(h for wi in fiber_vertices
                                   for h in g.vertices[wi] if h not in dead)
                new_vertices.append(tuple(rename[h] for h in survivors))
                if new_genus is not None:
                    b1 = len(edge_set) - len(fiber_vertices) + 1
                    new_genus.append(
                        sum(g.genus[wi] for wi in fiber_vertices) + b1)
        else:
            new_vertices.append(tuple(rename[h] for h in star))
            if new_genus is not None:
                new_genus.append(g.genus[vi])
    involution = [0] * len(keep)
    for h in keep:
        involution[rename[h]] = rename[g.involution[h]]
    legs = tuple(rename[h] for h in g.legs)
    ori = None
    if g.ori is not None:
        ori = [OUT] * len(keep)
        for h in keep:
            ori[rename[h]] = g.ori[h]
    if g.flavor in (RTR, WHE):
        # keep the out-before-in discipline at the collapsed vertex
        star = new_vertices[collapsed_at]
        star = tuple(sorted(star, key=lambda h: (ori[h] != OUT,
                                                 star.index(h))))
        new_vertices[collapsed_at] = star
    quotient = DecoratedGraph(g.flavor, new_vertices, involution, legs,
                              new_genus, ori)
    return ElementarySplit(g, tuple(sorted(edge_set)), fiber, quotient,
                           collapsed_at, rename, fiber_rename)


def admissible_splits(g: DecoratedGraph,
                      require_quotient_grade_ge_1: bool = False
                      ) -> list[ElementarySplit]:
    """All elementary contractions of g: one split per connected nonempty
    subset of internal edges (no deduplication along automorphisms of g;
    distinct edge subsets index distinct tower classes).  The optional
    flag drops the full contraction, whose quotient has grade 0."""
    edges = g.edges()
    out = []
    for r in range(1, len(edges) + 1):
        if require_quotient_grade_ge_1 and r == len(edges):
            continue
        for combo in itertools.combinations(edges, r):
            if _span_is_connected(g, combo):
                out.append(contract(g, combo))
    return out


def edge_image(iso: dict[int, int], e: Edge) -> Edge:
    """The image of an internal edge under a half-edge isomorphism."""
    a, b = iso[e[0]], iso[e[1]]
    return (a, b) if a < b else (b, a)
