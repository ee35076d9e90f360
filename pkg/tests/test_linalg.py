from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from operadforge.linalg import (
    RationalMatrix,
    Subspace,
    annihilator,
    homology,
    image,
    kernel,
    rank,
    rref,
    vec,
    vec_add,
    vec_dot,
)


def mat(rows: list[list[int]]) -> RationalMatrix:
    entries = {(i, j): x for i, r in enumerate(rows) for j, x in enumerate(r)}
    return RationalMatrix(len(rows), len(rows[0]) if rows else 0, entries)


def test_identity_rank_and_kernel():
    m = RationalMatrix.identity(3)
    _, r = rref(m)
    assert r == 3
    assert kernel(m).dim == 0


def test_zero_matrix_kernel_is_everything():
    m = RationalMatrix(2, 3)
    assert kernel(m).dim == 3
    assert image(m).dim == 0


def test_rank_one_kernel_hand_eliminated():
    # [[1,2],[2,4]]: second row is twice the first.
    m = mat([[1, 2], [2, 4]])
    assert rank(m) == 1
    k = kernel(m)
    assert k.dim == 1
    assert k.contains(vec({0: -2, 1: 1}))
    assert not k.contains(vec({0: 1, 1: 1}))


def test_rref_normalizes_pivots():
    m = mat([[0, 2, 4], [3, 3, 3]])
    red, r = rref(m)
    assert r == 2
    assert red[(0, 0)] == 1 and red[(1, 1)] == 1


def test_annihilator_of_difference_is_sum():
    # <->: identity pairing on Q^2; (e1 - e2)^perp = span(e1 + e2).
    s = Subspace(2, [vec({0: 1, 1: -1})])
    a = annihilator(s, RationalMatrix.identity(2))
    assert a.dim == 1
    assert a.contains(vec({0: 1, 1: 1}))


def test_annihilator_trivial_cases():
    full = Subspace(2, [vec({0: 1}), vec({1: 1})])
    zero = Subspace(2, [])
    assert annihilator(full, RationalMatrix.identity(2)).dim == 0
    assert annihilator(zero, RationalMatrix.identity(2)).dim == 2


def test_homology_zero_maps():
    d_out = RationalMatrix(1, 4)
    d_in = RationalMatrix(4, 2)
    betti, reps = homology(d_out, d_in)
    assert betti == 4
    assert reps.dim == 4


def test_homology_sum_map():
    # d_out = (1 1) : Q^2 -> Q^1, d_in = 0: kernel is the antidiagonal.
    d_out = mat([[1, 1]])
    d_in = RationalMatrix(2, 1)
    betti, reps = homology(d_out, d_in)
    assert betti == 1
    assert reps.contains(vec({0: 1, 1: -1}))


def test_homology_exact_pair():
    # Q -> Q^2 -> Q with d_in = (1, -1)^T and d_out = (1 1): exact.
    d_in = RationalMatrix(2, 1, {(0, 0): 1, (1, 0): -1})
    d_out = mat([[1, 1]])
    betti, _ = homology(d_out, d_in)
    assert betti == 0


def test_homology_rejects_non_complex():
    d_in = RationalMatrix(2, 1, {(0, 0): 1, (1, 0): 1})
    d_out = mat([[1, 1]])
    with pytest.raises(ValueError):
        homology(d_out, d_in)


def test_matmul_and_apply_agree():
    a = mat([[1, 2], [0, 1]])
    b = mat([[3, 0], [1, 1]])
    ab = a.matmul(b)
    for j in range(2):
        assert ab.col(j) == a.apply(b.col(j))


def test_subspace_membership_and_equality():
    s1 = Subspace(3, [vec({0: 1, 1: 1}), vec({1: 1, 2: 1})])
    s2 = Subspace(3, [vec({0: 2, 1: 2}), vec({0: 1, 2: -1})])
    assert s1 == s2
    assert s1.contains(vec({0: 1, 2: -1}))
    assert not s1.contains(vec({0: 1}))


small_ints = st.integers(min_value=-4, max_value=4)


@st.composite
def matrices(draw, max_dim: int = 5):
    rows = draw(st.integers(min_value=1, max_value=max_dim))
    cols = draw(st.integers(min_value=1, max_value=max_dim))
    entries = {}
    for i in range(rows):
        for j in range(cols):
            x = draw(small_ints)
            if x:
                entries[(i, j)] = x
    return RationalMatrix(rows, cols, entries)


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_rank_equals_transpose_rank(m):
    assert rank(m) == rank(m.transpose())


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_rank_nullity(m):
    assert rank(m) + kernel(m).dim == m.cols


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_rref_idempotent(m):
    red, r = rref(m)
    red2, r2 = rref(red)
    assert r == r2
    assert red.entries == red2.entries


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_kernel_vectors_are_killed(m):
    k = kernel(m)
    for b in k.basis:
        assert m.apply(b) == {}


@given(st.lists(st.lists(small_ints, min_size=3, max_size=3), max_size=4))
@settings(max_examples=60, deadline=None)
def test_annihilator_pairs_to_zero(rows):
    vectors = [vec(dict(enumerate(r))) for r in rows]
    s = Subspace(3, vectors)
    pairing = RationalMatrix.identity(3)
    a = annihilator(s, pairing)
    assert a.dim + s.dim == 3
    for u in a.basis:
        for w in s.basis:
            assert vec_dot(u, w) == 0


def test_json_round_trip():
    m = RationalMatrix(2, 2, {(0, 1): Fraction(1, 3), (1, 0): -2})
    again = RationalMatrix.from_json(m.to_json())
    assert again == m


def test_vec_add_cancels_to_empty():
    u = vec({0: 1, 2: 5})
    assert vec_add(u, u, Fraction(-1)) == {}
