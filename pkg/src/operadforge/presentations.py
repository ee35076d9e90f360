"""Quadratic presentations, their operad quotients, and Koszul duality.

A quadratic datum is a binary generator collection E together with a
subspace R(x) of the weight-2 free component at every 2-edge object x.
Every 2-edge object has exactly two height-2 tower classes (contract
one edge, then close), so the weight-2 component is 2-dimensional and
the built-in relation pattern is simply the difference of the two basis
classes -- switched on or off per shape.  The six built-ins:

  ggGrc, Tr, RTr, Whe, Per   difference relation on every 2-edge shape
  prePermutad                difference relation only on sequential
                             (chain) shapes; forks are unconstrained

The two-sided ideal generated by R is saturated weight by weight: the
weight-k piece at x is spanned by composites that insert a lower-weight
ideal element into either slot of every proper elementary split.  The
quotient F(E)/(R) of a terminal presentation is one-dimensional in the
top weight, which the tests pin down object by object.

Koszul duality runs through the weight-2 pairing: dual generators are
the suspended linear duals (same supports, degree +1), dual relations
are the annihilator of R under the class-diagonal pairing.  Degree +1
generators make the dual's ideal saturation sign-sensitive, so the
Koszul rules in the free-operad layer are load-bearing here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import freeop, opcat
from .freeop import Collection, Element, FreeComponent
from .graphs import GGGRC, RTR, TR, WHE
from .linalg import RationalMatrix, Subspace, Vec, annihilator
from .per import PER

BUILTIN_NAMES = ("ggGrc", "Tr", "RTr", "prePermutad", "Whe", "Per")

# prePermutad presents a different operad on the same rooted-tree category
_CATEGORY_OF = {"ggGrc": GGGRC, "Tr": TR, "RTr": RTR,
                "prePermutad": RTR, "Whe": WHE, "Per": PER}


@dataclass(frozen=True, eq=False)
class QuadraticData:
    """Generators plus weight-2 relations, with per-object memo tables.

    `relation_rule(x, comp)` receives a 2-edge object together with its
    weight-2 free component and returns spanning vectors for R(x) in the
    component's basis coordinates.  `shape_uniform` promises that the
    rule (and hence every derived dimension) only depends on the edge
    skeleton, which unlocks the math_key cache in quotient_dim; rules
    that read decorations -- prePermutad reads the root position -- must
    leave it off.
    """

    name: str
    flavor: str
    gens: Collection
    relation_rule: Callable
    shape_uniform: bool = False
    _relations: dict = field(default_factory=dict, repr=False)
    _ideals: dict = field(default_factory=dict, repr=False)
    _qdims: dict = field(default_factory=dict, repr=False)
    _dual: dict = field(default_factory=dict, repr=False)

    def relations(self, x) -> Subspace:
        """R(x) inside the weight-2 component at a 2-edge object."""
        assert opcat.grade(x) == 2, "relations live on 2-edge objects"
        hit = self._relations.get(x)
        if hit is None:
            comp = freeop.component(self.gens, x, 2)
            vecs = [dict(v) for v in self.relation_rule(x, comp)]
            hit = Subspace(comp.dim, vecs)
            self._relations[x] = hit
        return hit


@dataclass(frozen=True)
class OperadComponent:
    """One weight piece of a presented operad quotient at one object.

    `representatives` are basis indices of the free component whose
    cosets form a basis of the quotient (the non-pivot columns of the
    ideal's row-reduced basis).
    """

    obj: object
    weight: int
    dim: int
    representatives: tuple


def _difference_rule(x, comp: FreeComponent) -> list[Vec]:
    assert comp.dim == 2, \
        "a 2-edge object must have exactly two height-2 classes"
    return [{0: Fraction(1), 1: Fraction(-1)}]


def _is_sequential_pair(x) -> bool:
    """True when the two edges of a rooted 2-edge tree are stacked
    (root at an end of the path) rather than forking at the root."""
    root = x.vertex_of(x.legs[0])
    return not all(root in x.edge_endpoints(e) for e in x.edges())


def _chain_only_rule(x, comp: FreeComponent) -> list[Vec]:
    if _is_sequential_pair(x):
        return _difference_rule(x, comp)
    return []


_BUILTINS: dict[str, QuadraticData] = {}


def builtin_presentation(name: str) -> QuadraticData:
    """The named quadratic presentation; instances are shared so memo
    tables accumulate across callers."""
    assert name in BUILTIN_NAMES, "unknown presentation %r" % name
    got = _BUILTINS.get(name)
    if got is None:
        rule = _chain_only_rule if name == "prePermutad" else _difference_rule
        got = QuadraticData(name=name,
                            flavor=_CATEGORY_OF[name],
                            gens=freeop.one_edge_collection(name + ".E"),
                            relation_rule=rule,
                            shape_uniform=(name != "prePermutad"))
        _BUILTINS[name] = got
    return got


# -- ideal saturation ----------------------------------------------------

def ideal_component(q: QuadraticData, x, k: int) -> Subspace:
    """Weight-k piece at x of the two-sided ideal generated by R.

    Weight 2 is R(x) itself (on 2-edge objects; elsewhere it vanishes,
    since relations cannot be inserted with an empty complement).  Higher
    weights are the span of one-step insertions: for every proper split
    and every weight distribution, compose a lower-weight ideal element
    in one slot with a full free component in the other.  Recursion over
    strictly smaller fibers and quotients makes this a fixpoint.
    """
    key = (x, k)
    hit = q._ideals.get(key)
    if hit is not None:
        return hit
    amb = freeop.component(q.gens, x, k)
    vecs: list[Vec] = []
    if amb.dim and k == 2 and opcat.grade(x) == 2:
        vecs.extend(dict(v) for v in q.relations(x).basis)
    elif amb.dim and k >= 3:
        for s in opcat.splits(x, proper=True):
            for kq in range(1, k):
                kf = k - kq
                fcomp = freeop.component(q.gens, s.fiber, kf)
                qcomp = freeop.component(q.gens, s.quotient, kq)
                if fcomp.dim == 0 or qcomp.dim == 0:
                    continue
                fid = ideal_component(q, s.fiber, kf)
                qid = ideal_component(q, s.quotient, kq)
                for w in qid.basis:
                    left = Element(qcomp, dict(w))
                    for i in range(fcomp.dim):
                        out = freeop.compose(q.gens, s, left, fcomp.vector(i))
                        vecs.append(out.vec)
                for v in fid.basis:
                    right = Element(fcomp, dict(v))
                    for j in range(qcomp.dim):
                        out = freeop.compose(q.gens, s, qcomp.vector(j), right)
                        vecs.append(out.vec)
    got = Subspace(amb.dim, vecs)
    q._ideals[key] = got
    return got


def quotient_component(q: QuadraticData, x, k: int) -> OperadComponent:
    """Weight-k piece of F(E)/(R) at x with coset representatives."""
    amb = freeop.component(q.gens, x, k)
    ideal = ideal_component(q, x, k)
    reps = tuple(i for i in range(amb.dim) if i not in set(ideal.pivots))
    return OperadComponent(obj=x, weight=k,
                           dim=amb.dim - ideal.dim, representatives=reps)


def quotient_dim(q: QuadraticData, x) -> dict[int, int]:
    """Dimensions of F(E)/(R) at x per weight 1..e(x) ({0: 1} at grade 0).

    Shape-uniform presentations cache by edge skeleton, so a sweep over
    decorated objects pays for each underlying multigraph once.
    """
    e = opcat.grade(x)
    if e == 0:
        return {0: 1}
    mk = opcat.math_key(x) if q.shape_uniform else None
    if mk is not None:
        hit = q._qdims.get(mk)
        if hit is not None:
            return dict(hit)
    out = {}
    for k in range(1, e + 1):
        fdim = freeop.component(q.gens, x, k).dim
        out[k] = fdim - ideal_component(q, x, k).dim if fdim else 0
    if mk is not None:
        q._qdims[mk] = dict(out)
    return out


# -- Koszul duality ------------------------------------------------------

def dual_generators(q: QuadraticData) -> Collection:
    """Suspended linear dual of the generators: same supports and
    dimensions, degree raised by one."""
    base = q.gens

    def dualized(obj):
        key = opcat.vkey(obj)
        d = base.dim(key)
        return (d, base.degree(key) + 1) if d else None

    return Collection(base.name + "*", dualized)


def pairing_matrix(q: QuadraticData, x) -> RationalMatrix:
    """Weight-2 duality pairing at a 2-edge object: rows index the dual
    basis, columns the primal one, matching (class, generators) labels
    pair to 1 and everything else to 0."""
    assert opcat.grade(x) == 2, "the pairing is a weight-2 construction"
    dual = freeop.component(_dual_gens_of(q), x, 2)
    prim = freeop.component(q.gens, x, 2)
    entries = {}
    for i, label_i in enumerate(dual.basis):
        for j, label_j in enumerate(prim.basis):
            if label_i == label_j:
                entries[(i, j)] = Fraction(1)
    return RationalMatrix(dual.dim, prim.dim, entries)


def _dual_gens_of(q: QuadraticData) -> Collection:
    # share one dual collection per presentation so component memos hit
    if "gens" not in q._dual:
        q._dual["gens"] = dual_generators(q)
    return q._dual["gens"]


def koszul_dual(q: QuadraticData) -> QuadraticData:
    """The presentation on the suspended dual generators whose relations
    are the annihilator of R under the weight-2 pairing.  One shared
    instance per q, so its memo tables accumulate like the built-ins'."""
    got = q._dual.get("data")
    if got is not None:
        return got

    def orthogonal_rule(x, comp):
        return [dict(v)
                for v in annihilator(q.relations(x),
                                     pairing_matrix(q, x)).basis]

    got = QuadraticData(name=q.name + "!",
                        flavor=q.flavor,
                        gens=_dual_gens_of(q),
                        relation_rule=orthogonal_rule,
                        shape_uniform=q.shape_uniform)
    q._dual["data"] = got
    return got


def dual_component_as_determinant(flavor: str, x) -> tuple[int, int]:
    """(dimension, degree) of the top-weight Koszul dual quotient at x.

    For the terminal presentations this is one copy of the determinant
    line: dimension 1 in degree e(x), one suspension per generator.
    Computed from the dual quotient, not assumed.
    """
    q = koszul_dual(builtin_presentation(flavor))
    e = opcat.grade(x)
    dims = quotient_dim(q, x)
    if e == 0:
        return (dims[0], 0)
    comp = freeop.component(q.gens, x, e)
    degs = set(comp.degrees)
    assert len(degs) <= 1, "top dual component must be degree-pure"
    return (dims[e], degs.pop() if degs else 0)
