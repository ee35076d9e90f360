"""Tower classes against a contraction-replay oracle.

The module under test decides stage connectivity and span disjointness
with union-find on the original endpoints.  The oracle here replays each
candidate through actual contractions and asks the intermediate objects
themselves (translating edge names stage by stage), then closes under
interchanges the same way.  Both must produce identical partitions.
"""

from __future__ import annotations

import itertools

from operadforge import opcat, towers
from operadforge.graphs import GGGRC, IN, OUT, TR, WHE, DecoratedGraph
from operadforge.per import PerObject


def two_loop() -> DecoratedGraph:
    return DecoratedGraph(GGGRC, [(0, 1, 2, 3)], (1, 0, 3, 2), (),
                          genus=[0])


def interval() -> DecoratedGraph:
    return DecoratedGraph(GGGRC, [(0,), (1,)], (1, 0), (), genus=[0, 0])


def eye() -> DecoratedGraph:
    return DecoratedGraph(GGGRC, [(0, 1), (2, 3)], (2, 3, 0, 1), (),
                          genus=[0, 0])


def lollipop() -> DecoratedGraph:
    return DecoratedGraph(GGGRC, [(0, 1, 2), (3,)], (1, 0, 3, 2), (),
                          genus=[0, 0])


def gg_path(n_edges: int) -> DecoratedGraph:
    """Path with n_edges edges and n_edges+1 genus-0 vertices."""
    stars = [(0,)]
    for v in range(1, n_edges):
        stars.append((2 * v - 1, 2 * v))
    stars.append((2 * n_edges - 1,))
    inv = []
    for e in range(n_edges):
        inv += [2 * e + 1, 2 * e]
    return DecoratedGraph(GGGRC, stars, tuple(inv), (),
                          genus=[0] * (n_edges + 1))


def whe_2cycle() -> DecoratedGraph:
    return DecoratedGraph(WHE, [(0, 1), (2, 3)], (3, 2, 1, 0), (),
                          ori=[OUT, IN, OUT, IN])


def tr_star3() -> DecoratedGraph:
    """Central vertex with three edges to leaves."""
    return DecoratedGraph(TR, [(0, 1, 2), (3,), (4,), (5,)],
                          (3, 4, 5, 0, 1, 2), ())


CATALOG = [
    two_loop(), interval(), eye(), lollipop(), gg_path(2), gg_path(3),
    gg_path(4), whe_2cycle(), tr_star3(),
    PerObject((1, 2)), PerObject((1, 2, 3)), PerObject((1, 2, 3, 4)),
    PerObject((2, 1, 3, 1)), PerObject((1, 2, 3, 4, 2)),
]


# -- oracle ------------------------------------------------------------------

def _replay(x, blocks):
    """Contract `blocks` in order; return (object, original-edge map)."""
    current = x
    emap = {e: e for e in opcat.edge_list(x)}
    for b in blocks:
        s = opcat.split(current, sorted(emap[e] for e in b))
        gone = set(s.fiber_edges)
        emap = {e: s.quotient_edge(c) for e, c in emap.items()
                if c not in gone}
        current = s.quotient
    return current, emap


def oracle_shapes(x, k):
    edges = opcat.edge_list(x)
    if not 1 <= k <= len(edges):
        return []
    res = []

    def rec(current, emap, remaining, acc):
        slots = k - len(acc)
        if slots == 1:
            res.append(acc + (remaining,))
            return
        for size in range(1, len(remaining) - (slots - 1) + 1):
            for block in itertools.combinations(remaining, size):
                mapped = sorted(emap[e] for e in block)
                if not opcat.is_connected_edge_set(current, mapped):
                    continue
                s = opcat.split(current, mapped)
                gone = set(s.fiber_edges)
                emap2 = {e: s.quotient_edge(c) for e, c in emap.items()
                         if c not in gone}
                chosen = set(block)
                rec(s.quotient, emap2,
                    tuple(e for e in remaining if e not in chosen),
                    acc + (block,))

    rec(x, {e: e for e in edges}, edges, ())
    return res


def oracle_neighbors(x, shape):
    out = []
    for u in range(len(shape) - 2):
        current, emap = _replay(x, shape[:u])
        left = {v for e in shape[u]
                for v in opcat.edge_ends(current, emap[e])}
        right = {v for e in shape[u + 1]
                 for v in opcat.edge_ends(current, emap[e])}
        if not left & right:
            out.append(shape[:u] + (shape[u + 1], shape[u]) + shape[u + 2:])
    return out


def oracle_classes(x, k):
    seen, reps = set(), []
    for s in oracle_shapes(x, k):
        if s in seen:
            continue
        todo, members = [s], []
        seen.add(s)
        while todo:
            cur = todo.pop()
            members.append(cur)
            for nb in oracle_neighbors(x, cur):
                if nb not in seen:
                    seen.add(nb)
                    todo.append(nb)
        reps.append(min(members))
    return tuple(sorted(reps))


# -- frozen values -----------------------------------------------------------

def test_two_loop_binary_classes():
    x = two_loop()
    orders = [c.order for c in towers.binary_tower_classes(x)]
    assert len(orders) == 2          # the two loops never interchange
    e1, e2 = opcat.edge_list(x)
    assert sorted(orders) == [(e1, e2), (e2, e1)]


def test_per_path3_binary_classes():
    x = PerObject((1, 2, 3, 4))
    orders = sorted(c.order for c in towers.binary_tower_classes(x))
    # gaps 1,3 interchange in first position only; the final gap is part
    # of the closing step and stays put, keeping 213 and 231 apart
    assert orders == [(1, 2, 3), (1, 3, 2), (2, 1, 3), (2, 3, 1), (3, 2, 1)]


def test_class_normalization_and_permutation():
    x = PerObject((1, 2, 3, 4))
    rep, perm = towers.class_of(x, ((3,), (1,), (2,)))
    assert rep == ((1,), (3,), (2,))
    assert perm == (1, 0, 2)
    # representative of a representative is itself, identity permutation
    rep2, perm2 = towers.class_of(x, rep)
    assert rep2 == rep and perm2 == (0, 1, 2)


def test_single_edge_towers():
    x = interval()
    assert len(towers.binary_tower_classes(x)) == 1
    assert towers.height2_classes(x, proper=True) == ()
    improper = towers.height2_classes(x, proper=False)
    assert len(improper) == 1
    assert improper[0].shape[1] == ()   # nothing left for the final step


def test_path_height2():
    assert len(towers.height2_classes(gg_path(2))) == 2
    # 3-edge path: contract one edge or one of the two adjacent pairs
    assert len(towers.height2_classes(gg_path(3))) == 5


def test_stagewise_disjointness_matters():
    # on the 4-edge path, contracting e2 first merges the endpoints of
    # e1 and e3, so they may not interchange afterwards
    x = gg_path(4)
    e1, e2, e3, e4 = opcat.edge_list(x)
    rep_a, _ = towers.class_of(x, ((e2,), (e1,), (e3,), (e4,)))
    rep_b, _ = towers.class_of(x, ((e2,), (e3,), (e1,), (e4,)))
    assert rep_a != rep_b
    # with no prior contraction the same pair does interchange
    rep_c, _ = towers.class_of(x, ((e1,), (e3,), (e2,), (e4,)))
    rep_d, _ = towers.class_of(x, ((e3,), (e1,), (e2,), (e4,)))
    assert rep_c == rep_d


def test_eye_binary_classes():
    # parallel edges share both endpoints: no interchange
    assert len(towers.binary_tower_classes(eye())) == 2


def test_height1_is_the_object_itself():
    for x in CATALOG:
        (cls,) = towers.general_tower_classes(x, 1)
        assert cls.fiber_keys == (opcat.vkey(x),)
        assert cls.splits == ()


def test_height2_matches_tower_classes():
    for x in CATALOG:
        if opcat.grade(x) < 2:
            continue
        shapes = [t.shape for t in towers.height2_classes(x)]
        assert tuple(sorted(shapes)) == towers.tower_classes(x, 2)


def test_grades_add_up_along_fibers():
    for x in CATALOG:
        e = opcat.grade(x)
        for k in range(1, e + 1):
            for cls in towers.general_tower_classes(x, k):
                fibs = [opcat.object_from_vkey(key)
                        for key in cls.fiber_keys]
                assert sum(opcat.grade(f) for f in fibs) == e
                assert all(opcat.grade(f) >= 1 for f in fibs)


def test_engine_matches_oracle():
    for x in CATALOG:
        for k in range(1, opcat.grade(x) + 1):
            got = towers.tower_classes(x, k)
            want = oracle_classes(x, k)
            assert got == want, (x, k)


def test_every_shape_normalizes_into_the_enumeration():
    for x in CATALOG:
        e = opcat.grade(x)
        for k in range(1, min(e, 3) + 1):
            reps = set(towers.tower_classes(x, k))
            for shape in towers.all_tower_shapes(x, k):
                rep, perm = towers.class_of(x, shape)
                assert rep in reps
                assert tuple(rep[i] for i in range(len(rep))) == \
                    tuple(shape[p] for p in perm)


def test_graft_concatenates_fiber_sequences():
    for x in CATALOG:
        if opcat.grade(x) < 2:
            continue
        for s in opcat.splits(x, proper=True)[:4]:
            for kf in range(1, opcat.grade(s.fiber) + 1):
                for kq in range(1, opcat.grade(s.quotient) + 1):
                    tf = towers.general_tower_classes(s.fiber, kf)[0]
                    tq = towers.general_tower_classes(s.quotient, kq)[0]
                    shape = towers.graft(s, tf.shape, tq.shape)
                    whole = towers.realize_tower(x, shape)
                    assert whole.fiber_keys == \
                        tf.fiber_keys + tq.fiber_keys


def test_binary_matches_general_at_top_height():
    for x in CATALOG:
        e = opcat.grade(x)
        if e == 0:
            continue
        orders = {c.order for c in towers.binary_tower_classes(x)}
        tops = {tuple(b[0] for b in t.shape)
                for t in towers.general_tower_classes(x, e)}
        assert orders == tops
