"""Free operad components on a generator collection.

A weight-k component F(E)^k(X) has one basis vector per pair (height-k
tower class, choice of generator index in each fiber).  Basis vectors
are anchored to the class's minimal shape and to the concrete fibers
realize_tower produces for it, so coordinates are reproducible across
runs.  Rewriting any other member of a class into the representative
costs the Koszul sign of the block permutation on generator degrees;
generator transport along the internal renames is free because the
renames preserve name order (see graphs.contract).

Grade-0 objects carry the unit: a single weight-0 basis vector.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import opcat, towers
from .linalg import Vec, vec_add, vec_scale


def perm_sign(perm) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def koszul_sign(perm, degrees) -> int:
    """Sign for reordering graded symbols so position i of the result
    holds symbol perm[i] of the input; `degrees` index the input."""
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j] and \
                    degrees[perm[i]] % 2 and degrees[perm[j]] % 2:
                sign = -sign
    return sign


@dataclass(frozen=True, eq=False)
class Collection:
    """Generator data on virtual classes: object -> (dimension, degree).

    `rule` is consulted once per virtual class and its answers are
    recorded in `table` (key -> (dim, degree)), so the support in actual
    use is always a finite, printable table.  `det_signs` marks the
    generators as determinant-type: isomorphism transport then carries
    the sign of the induced permutation of internal edges instead of
    being trivial.
    """

    name: str
    rule: Callable
    det_signs: bool = False
    table: dict = field(default_factory=dict, repr=False)
    components: dict = field(default_factory=dict, repr=False)

    def entry(self, key) -> tuple[int, int]:
        got = self.table.get(key)
        if got is None:
            got = self.rule(opcat.object_from_vkey(key)) or (0, 0)
            self.table[key] = got
        return got

    def dim(self, key) -> int:
        return self.entry(key)[0]

    def degree(self, key) -> int:
        return self.entry(key)[1]


def one_edge_collection(name: str = "binary") -> Collection:
    """dim 1, degree 0 on every one-edge class: the generator data of
    the built-in quadratic presentations."""
    return Collection(name,
                      lambda x: (1, 0) if opcat.grade(x) == 1 else None)


@dataclass(frozen=True, eq=False)
class FreeComponent:
    """Basis-indexed weight-k piece of the free operad at one object."""

    collection: Collection
    obj: object
    weight: int
    basis: tuple                 # ((shape, gens), ...)
    degrees: tuple
    _pos: dict = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def position(self, shape, gens) -> int:
        return self._pos[(shape, gens)]

    def vector(self, index: int, coeff=Fraction(1)) -> "Element":
        return Element(self, {index: Fraction(coeff)})


@dataclass
class Element:
    component: FreeComponent
    vec: Vec

    def __add__(self, other: "Element") -> "Element":
        assert self.component is other.component
        return Element(self.component, vec_add(self.vec, other.vec))

    def scaled(self, c) -> "Element":
        return Element(self.component, vec_scale(self.vec, Fraction(c)))

    def __eq__(self, other) -> bool:
        return self.component is other.component and self.vec == other.vec


def component(E: Collection, x, k: int) -> FreeComponent:
    """The weight-k component of the free operad on E at x."""
    key = (x, k)
    got = E.components.get(key)
    if got is not None:
        return got
    basis, degrees = [], []
    if opcat.grade(x) == 0:
        if k == 0:
            basis.append(((), ()))
            degrees.append(0)
    else:
        for rep in towers.tower_classes(x, k):
            cls = towers.realize_tower(x, rep)
            dims = [E.dim(fk) for fk in cls.fiber_keys]
            if 0 in dims:
                continue
            total = sum(E.degree(fk) for fk in cls.fiber_keys)
            for gens in itertools.product(*[range(d) for d in dims]):
                basis.append((rep, gens))
                degrees.append(total)
    comp = FreeComponent(E, x, k, tuple(basis), tuple(degrees),
                         {b: i for i, b in enumerate(basis)})
    E.components[key] = comp
    return comp


def total_dim(E: Collection, x) -> dict[int, int]:
    """Weight -> dimension over all weights (0 or 1 through e(x))."""
    e = opcat.grade(x)
    ks = (0,) if e == 0 else range(1, e + 1)
    return {k: component(E, x, k).dim for k in ks}


def _factor_degrees(E: Collection, split, f_shape, q_shape) -> list[int]:
    degs = []
    if f_shape:
        tf = towers.realize_tower(split.fiber, f_shape)
        degs += [E.degree(fk) for fk in tf.fiber_keys]
    if q_shape:
        tq = towers.realize_tower(split.quotient, q_shape)
        degs += [E.degree(fk) for fk in tq.fiber_keys]
    return degs


def compose(E: Collection, split, left: Element, right: Element) -> Element:
    """Partial composition along an elementary contraction: `right`
    lives on the fiber, `left` on the quotient, and the result on the
    source, with the fiber's tower grafted in front of the quotient's.

    Determinant-type generators never travel through here (their only
    consumer builds differentials directly on towers), so transport
    signs reduce to the Koszul sign of the normalizing permutation.
    """
    assert not E.det_signs, \
        "compose() only carries trivially-transported generators"
    assert left.component.collection is E
    assert right.component.collection is E
    assert left.component.obj == split.quotient
    assert right.component.obj == split.fiber
    src = split.source
    target = component(E, src, left.component.weight + right.component.weight)
    out: Vec = {}
    for pf, cf in right.vec.items():
        f_shape, f_gens = right.component.basis[pf]
        for pq, cq in left.vec.items():
            q_shape, q_gens = left.component.basis[pq]
            shape = towers.graft(split, f_shape, q_shape)
            degs = _factor_degrees(E, split, f_shape, q_shape)
            rep, perm = towers.class_of(src, shape)
            gens = f_gens + q_gens
            sign = koszul_sign(perm, degs)
            pos = target.position(rep, tuple(gens[p] for p in perm))
            out[pos] = out.get(pos, Fraction(0)) + sign * cf * cq
    return Element(target, {p: c for p, c in out.items() if c})


def iso_action(E: Collection, f, source_obj, elem: Element) -> Element:
    """Pull back along an isomorphism f: source_obj -> elem's object
    (given on half-edges; None is the identity).  Contravariant."""
    if E.det_signs:
        raise NotImplementedError(
            "determinant generators are transported only along the "
            "order-preserving renames used inside the tower machinery")
    x = elem.component.obj
    target = component(E, source_obj, elem.component.weight)
    if f is None:
        assert source_obj == x, "identity transport needs equal objects"
        return Element(target, dict(elem.vec))
    fwd = {e: opcat.edge_map(f, e) for e in opcat.edge_list(source_obj)}
    back = {img: e for e, img in fwd.items()}
    out: Vec = {}
    for pos, c in elem.vec.items():
        shape, gens = elem.component.basis[pos]
        degs = [E.degree(fk)
                for fk in towers.realize_tower(x, shape).fiber_keys]
        pulled = tuple(tuple(sorted(back[e] for e in b)) for b in shape)
        rep, perm = towers.class_of(source_obj, pulled)
        sign = koszul_sign(perm, degs)
        pos2 = target.position(rep, tuple(gens[p] for p in perm))
        out[pos2] = out.get(pos2, Fraction(0)) + sign * c
    return Element(target, {p: c for p, c in out.items() if c})
