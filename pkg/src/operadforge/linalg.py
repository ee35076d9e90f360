"""Sparse exact linear algebra over the rationals.

Matrices are immutable dict-of-keys maps (row, col) -> Fraction with no
stored zeros.  Everything is exact; there are no tolerance parameters
anywhere in this module.  Pivoting is deterministic (first nonzero entry
in column-major order), so reduced bases are reproducible across runs.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Mapping

Scalar = Fraction
Vec = dict[int, Fraction]  # sparse vector, index -> nonzero coefficient


def vec(entries: Mapping[int, object] | Iterable[tuple[int, object]]) -> Vec:
    """Build a sparse vector, dropping zeros and normalizing to Fraction."""
    items = entries.items() if isinstance(entries, Mapping) else entries
    out: Vec = {}
    for i, x in items:
        f = Fraction(x)
        if f:
            out[i] = f
    return out


def vec_add(u: Vec, v: Vec, c: Scalar = Fraction(1)) -> Vec:
    """u + c*v, dropping entries that cancel."""
    out = dict(u)
    for i, x in v.items():
        s = out.get(i, Fraction(0)) + c * x
        if s:
            out[i] = s
        else:
            out.pop(i, None)
    return out


def vec_scale(u: Vec, c: Scalar) -> Vec:
    if not c:
        return {}
    return {i: c * x for i, x in u.items()}


def vec_dot(u: Vec, v: Vec) -> Scalar:
    if len(v) < len(u):
        u, v = v, u
    return sum((x * v[i] for i, x in u.items() if i in v), Fraction(0))


class RationalMatrix:
    """Immutable sparse matrix over Q.

    entries maps (row, col) to a nonzero Fraction.  Out-of-range indices
    are rejected at construction; zeros are silently dropped.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int,
                 entries: Mapping[tuple[int, int], object] | None = None):
        assert rows >= 0 and cols >= 0, (rows, cols)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        clean: dict[tuple[int, int], Fraction] = {}
        for (i, j), x in (entries or {}).items():
            assert 0 <= i < rows and 0 <= j < cols, \
                "entry (%d, %d) outside a %d x %d matrix" % (i, j, rows, cols)
            f = Fraction(x)
            if f:
                clean[(i, j)] = f
        object.__setattr__(self, "entries", clean)

    def __setattr__(self, name, value):
        raise AttributeError("RationalMatrix is immutable")

    def __eq__(self, other):
        return (isinstance(other, RationalMatrix)
                and (self.rows, self.cols) == (other.rows, other.cols)
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    def __repr__(self):
        return "RationalMatrix(%d x %d, %d nonzero)" % (
            self.rows, self.cols, len(self.entries))

    def __getitem__(self, ij: tuple[int, int]) -> Scalar:
        return self.entries.get(ij, Fraction(0))

    def row(self, i: int) -> Vec:
        return {j: x for (r, j), x in self.entries.items() if r == i}

    def col(self, j: int) -> Vec:
        return {i: x for (i, c), x in self.entries.items() if c == j}

    def row_vectors(self) -> list[Vec]:
        out: list[Vec] = [{} for _ in range(self.rows)]
        for (i, j), x in self.entries.items():
            out[i][j] = x
        return out

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(
            self.cols, self.rows,
            {(j, i): x for (i, j), x in self.entries.items()})

    def matmul(self, other: "RationalMatrix") -> "RationalMatrix":
        assert self.cols == other.rows, \
            "cannot compose %s with %s" % (self, other)
        by_row: dict[int, Vec] = {}
        for (i, j), x in self.entries.items():
            by_row.setdefault(i, {})[j] = x
        other_rows = other.row_vectors()
        prod: dict[tuple[int, int], Fraction] = {}
        for i, rowv in by_row.items():
            acc: Vec = {}
            for j, x in rowv.items():
                for k, y in other_rows[j].items():
                    s = acc.get(k, Fraction(0)) + x * y
                    if s:
                        acc[k] = s
                    else:
                        acc.pop(k, None)
            for k, s in acc.items():
                prod[(i, k)] = s
        return RationalMatrix(self.rows, other.cols, prod)

    def apply(self, v: Vec) -> Vec:
        """Matrix times sparse column vector."""
        out: Vec = {}
        for (i, j), x in self.entries.items():
            if j in v:
                s = out.get(i, Fraction(0)) + x * v[j]
                if s:
                    out[i] = s
                else:
                    out.pop(i, None)
        return out

    def is_zero(self) -> bool:
        return not self.entries

    @staticmethod
    def from_columns(rows: int, columns: list[Vec]) -> "RationalMatrix":
        entries = {(i, j): x for j, colv in enumerate(columns)
                   for i, x in colv.items()}
        return RationalMatrix(rows, len(columns), entries)

    @staticmethod
    def from_rows(cols: int, rows_: list[Vec]) -> "RationalMatrix":
        entries = {(i, j): x for i, rowv in enumerate(rows_)
                   for j, x in rowv.items()}
        return RationalMatrix(len(rows_), cols, entries)

    @staticmethod
    def identity(n: int) -> "RationalMatrix":
        return RationalMatrix(n, n, {(i, i): Fraction(1) for i in range(n)})

    def to_json(self) -> str:
        """Triplet dump for debugging; row-major sorted, exact strings."""
        triples = [[i, j, str(x)]
                   for (i, j), x in sorted(self.entries.items())]
        return json.dumps({"rows": self.rows, "cols": self.cols,
                           "entries": triples})

    @staticmethod
    def from_json(text: str) -> "RationalMatrix":
        data = json.loads(text)
        entries = {(i, j): Fraction(x) for i, j, x in data["entries"]}
        return RationalMatrix(data["rows"], data["cols"], entries)


def _row_reduce(rows: list[Vec]) -> tuple[list[Vec], list[int]]:
    """In-place style RREF on a list of sparse row vectors.

    Pivot choice is deterministic: sweep columns in increasing order, take
    the first remaining row with a nonzero entry in that column.  Returns
    the nonzero reduced rows (pivots normalized to 1, pivot columns cleared
    elsewhere) together with the pivot column list.
    """
    work = [dict(r) for r in rows]
    pivots: list[int] = []
    done: list[Vec] = []
    cols_present = sorted({j for r in work for j in r})
    for col in cols_present:
        hit = None
        for idx, r in enumerate(work):
            if col in r:
                hit = idx
                break
        if hit is None:
            continue
        piv = work.pop(hit)
        piv = vec_scale(piv, 1 / piv[col])
        work = [vec_add(r, piv, -r[col]) if col in r else r for r in work]
        done = [vec_add(r, piv, -r[col]) if col in r else r for r in done]
        done.append(piv)
        pivots.append(col)
    return done, pivots


class Subspace:
    """A subspace of Q^n held as a pivot-normalized RREF basis."""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, vectors: list[Vec]):
        for v in vectors:
            assert all(0 <= i < ambient_dim for i in v), \
                "vector index outside ambient dimension %d" % ambient_dim
        basis, pivots = _row_reduce(vectors)
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "pivots", pivots)

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __eq__(self, other):
        return (isinstance(other, Subspace)
                and self.ambient_dim == other.ambient_dim
                and self.pivots == other.pivots
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient_dim, tuple(self.pivots)))

    def __repr__(self):
        return "Subspace(dim %d of Q^%d)" % (self.dim, self.ambient_dim)

    def reduce(self, v: Vec) -> Vec:
        """Remainder of v after subtracting its projection on the basis."""
        r = dict(v)
        for pcol, b in zip(self.pivots, self.basis):
            if pcol in r:
                r = vec_add(r, b, -r[pcol])
        return r

    def contains(self, v: Vec) -> bool:
        return not self.reduce(v)

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(b) for b in other.basis)

    def sum(self, other: "Subspace") -> "Subspace":
        assert self.ambient_dim == other.ambient_dim
        return Subspace(self.ambient_dim, self.basis + other.basis)


def rref(m: RationalMatrix) -> tuple[RationalMatrix, int]:
    """Reduced row echelon form and rank."""
    reduced, pivots = _row_reduce(m.row_vectors())
    return RationalMatrix.from_rows(m.cols, reduced + [{}] * (m.rows - len(reduced))), len(pivots)


def rank(m: RationalMatrix) -> int:
    return rref(m)[1]


def kernel(m: RationalMatrix) -> Subspace:
    """Right null space {v : m v = 0} as a subspace of Q^cols."""
    reduced, pivots = _row_reduce(m.row_vectors())
    pivot_set = set(pivots)
    free_cols = [j for j in range(m.cols) if j not in pivot_set]
    basis: list[Vec] = []
    for fc in free_cols:
        v: Vec = {fc: Fraction(1)}
        for pcol, rowv in zip(pivots, reduced):
            if fc in rowv:
                v[pcol] = -rowv[fc]
        basis.append(v)
    return Subspace(m.cols, basis)


def image(m: RationalMatrix) -> Subspace:
    """Column space of m as a subspace of Q^rows."""
    cols = [m.col(j) for j in range(m.cols)]
    return Subspace(m.rows, cols)


def annihilator(s: Subspace, pairing: RationalMatrix) -> Subspace:
    """{v : <v, b> = 0 for all basis b of s} with <v, w> = v^T . pairing . w.

    v lives in Q^pairing.rows, s in Q^pairing.cols.
    """
    assert s.ambient_dim == pairing.cols, \
        "pairing has %d columns but subspace ambient is %d" % (
            pairing.cols, s.ambient_dim)
    # Row i of the constraint matrix: v |-> <v, b_i> = (pairing . b_i)^T v
    constraints = [pairing.apply(b) for b in s.basis]
    cmat = RationalMatrix.from_rows(pairing.rows, constraints)
    return kernel(cmat)


def homology(d_out: RationalMatrix, d_in: RationalMatrix) -> tuple[int, Subspace]:
    """Betti number at the joint of d_in (incoming) and d_out (outgoing).

    d_in : C_prev -> C_here and d_out : C_here -> C_next must compose to
    zero; violating that is an error, not a zero — it surfaces sign bugs
    in differential constructions instead of hiding them.

    Returns (betti, representatives) with betti = dim ker(d_out) - rank(d_in)
    and representatives a complement of the image inside the kernel.
    """
    assert d_out.cols == d_in.rows, \
        "chain mismatch: d_out expects dim %d, d_in lands in dim %d" % (
            d_out.cols, d_in.rows)
    comp = d_out.matmul(d_in)
    if not comp.is_zero():
        raise ValueError("not a complex: d_out . d_in has %d nonzero entries"
                         % len(comp.entries))
    ker = kernel(d_out)
    img = image(d_in)
    reps: list[Vec] = []
    span = img
    for b in ker.basis:
        r = span.reduce(b)
        if r:
            reps.append(r)
            span = span.sum(Subspace(span.ambient_dim, [r]))
    betti = ker.dim - img.dim
    assert betti == len(reps), "rank bookkeeping is off"
    return betti, Subspace(d_out.cols, reps)
