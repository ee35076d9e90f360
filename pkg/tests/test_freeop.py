"""Free-operad components, composition, and isomorphism actions."""

from __future__ import annotations

from fractions import Fraction

import pytest

from operadforge import freeop, opcat, towers
from operadforge.freeop import Collection, component, compose, iso_action, \
    one_edge_collection, total_dim
from operadforge.graphs import GGGRC, DecoratedGraph, automorphisms, corolla
from operadforge.per import PerObject


def two_loop() -> DecoratedGraph:
    return DecoratedGraph(GGGRC, [(0, 1, 2, 3)], (1, 0, 3, 2), (),
                          genus=[0])


def interval() -> DecoratedGraph:
    return DecoratedGraph(GGGRC, [(0,), (1,)], (1, 0), (), genus=[0, 0])


def gg_path(n_edges: int) -> DecoratedGraph:
    stars = [(0,)]
    for v in range(1, n_edges):
        stars.append((2 * v - 1, 2 * v))
    stars.append((2 * n_edges - 1,))
    inv = []
    for e in range(n_edges):
        inv += [2 * e + 1, 2 * e]
    return DecoratedGraph(GGGRC, stars, tuple(inv), (),
                          genus=[0] * (n_edges + 1))


def odd_collection() -> Collection:
    return Collection("odd-test",
                      lambda x: (1, 1) if opcat.grade(x) == 1 else None)


E = one_edge_collection()


def test_two_loop_weight2_dimension():
    comp = component(E, two_loop(), 2)
    assert comp.dim == 2
    shapes = [b[0] for b in comp.basis]
    e1, e2 = two_loop().edges()
    assert shapes == [((e1,), (e2,)), ((e2,), (e1,))]


def test_binary_collection_concentrates_in_top_weight():
    for x in (two_loop(), gg_path(3), PerObject((1, 2, 3, 4))):
        e = opcat.grade(x)
        dims = total_dim(E, x)
        assert all(dims[k] == 0 for k in range(1, e))
        assert dims[e] == len(towers.binary_tower_classes(x))


def test_per_path3_weight3_dimension():
    # five tower classes, one generator each
    assert component(E, PerObject((1, 2, 3, 4)), 3).dim == 5


def test_weight1_is_the_collection():
    x = interval()
    assert component(E, x, 1).dim == 1
    assert component(E, two_loop(), 1).dim == 0   # two edges, not one


def test_unit_component():
    comp = component(E, corolla(GGGRC, 2), 0)
    assert comp.dim == 1 and comp.degrees == (0,)


def test_compose_lands_on_named_basis_vectors():
    x = two_loop()
    e1, e2 = x.edges()
    target = component(E, x, 2)
    for fiber_edge, expected_shape in (
            (e1, ((e1,), (e2,))), (e2, ((e2,), (e1,)))):
        s = opcat.split(x, [fiber_edge])
        right = component(E, s.fiber, 1).vector(0)
        left = component(E, s.quotient, 1).vector(0)
        got = compose(E, s, left, right)
        assert got.vec == {target.position(expected_shape, (0, 0)):
                           Fraction(1)}


def test_unit_law():
    x = interval()
    s = opcat.split(x, x.edges())          # full contraction
    unit = component(E, s.quotient, 0).vector(0)
    gen = component(E, s.fiber, 1).vector(0)
    got = compose(E, s, unit, gen)
    assert got.component is component(E, x, 1)
    assert got.vec == {0: Fraction(1)}


def _parallel_routes(coll: Collection):
    """Both orders of composing into the ends of the 3-edge path."""
    x = gg_path(3)
    e1, e2, e3 = x.edges()
    phi = opcat.split(x, [e1])
    psi = opcat.split(x, [e3])
    psi_in_y = opcat.split(phi.quotient, [phi.quotient_edge(e3)])
    phi_in_y = opcat.split(psi.quotient, [psi.quotient_edge(e1)])
    assert psi_in_y.quotient == phi_in_y.quotient
    top = component(coll, psi_in_y.quotient, 1).vector(0)
    route1 = compose(coll, phi,
                     compose(coll, psi_in_y, top,
                             component(coll, psi_in_y.fiber, 1).vector(0)),
                     component(coll, phi.fiber, 1).vector(0))
    route2 = compose(coll, psi,
                     compose(coll, phi_in_y, top,
                             component(coll, phi_in_y.fiber, 1).vector(0)),
                     component(coll, psi.fiber, 1).vector(0))
    return route1, route2


def test_parallel_axiom_even_generators():
    route1, route2 = _parallel_routes(E)
    assert route1 == route2


def test_parallel_axiom_odd_generators():
    # swapping two odd generators costs a sign
    route1, route2 = _parallel_routes(odd_collection())
    assert route1 == route2.scaled(-1)
    assert route1.component.degrees == (3, 3, 3, 3, 3)


def test_sequential_axiom_instance():
    x = gg_path(3)
    e1, e2, e3 = x.edges()
    theta = opcat.split(x, [e1, e2])
    inner_split = opcat.split(theta.fiber, [theta.fiber_edge(e1)])
    phi = opcat.split(x, [e1])
    psi = opcat.split(phi.quotient, [phi.quotient_edge(e2)])
    assert theta.quotient == psi.quotient
    top = component(E, theta.quotient, 1).vector(0)
    route_nested = compose(
        E, theta, top,
        compose(E, inner_split,
                component(E, inner_split.quotient, 1).vector(0),
                component(E, inner_split.fiber, 1).vector(0)))
    route_stepwise = compose(
        E, phi,
        compose(E, psi, top, component(E, psi.fiber, 1).vector(0)),
        component(E, phi.fiber, 1).vector(0))
    assert route_nested == route_stepwise


def test_iso_action_permutes_loop_classes():
    x = two_loop()
    comp = component(E, x, 2)
    swap = next(f for f in automorphisms(x) if f[0] == 2)
    acted = iso_action(E, swap, x, comp.vector(0))
    assert acted.vec == {1: Fraction(1)}
    again = iso_action(E, swap, x, acted)
    assert again.vec == {0: Fraction(1)}


def test_iso_action_identity_and_per():
    x = PerObject((1, 2, 3))
    comp = component(E, x, 2)
    elem = comp.vector(1, Fraction(3, 2))
    assert iso_action(E, None, x, elem) == elem


def test_compose_rejects_determinant_collections():
    det = Collection("det-test", lambda x: (1, 1), det_signs=True)
    x = interval()
    s = opcat.split(x, x.edges())
    with pytest.raises(AssertionError):
        compose(det, s, component(det, s.quotient, 0).vector(0),
                component(det, s.fiber, 1).vector(0))
