from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from koszul_cones.errors import CompositionNotZero, NotPrime
from koszul_cones.exact_linalg import (
    GF,
    QQ,
    ZERO_GROUP,
    ZZ,
    AbelianGroupInvariants,
    SparseMatrix,
    homology_pair,
    invariant_factors_from_orders,
    parse_ring,
    rank,
    rank_over_field,
    smith_normal_form,
    stack_blocks,
)
from oracles import invariant_factors_by_minors, sympy_rank


def small_matrices(max_dim=4, bound=6):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(-bound, bound), min_size=c, max_size=c), min_size=r, max_size=r
            )
        )
    )


def test_parse_ring():
    assert parse_ring("int") == ZZ
    assert parse_ring("Q") == QQ
    assert parse_ring("gf3") == GF(3)
    assert parse_ring("gf(5)") == GF(5)
    assert str(GF(3)) == "gf3"
    with pytest.raises(NotPrime):
        parse_ring("gf4")
    with pytest.raises(ValueError):
        parse_ring("reals")


def test_ring_properties():
    assert not ZZ.is_field and QQ.is_field and GF(7).is_field
    assert ZZ.characteristic == 0 and GF(7).characteristic == 7


def test_sparse_matrix_basics():
    A = SparseMatrix.from_dense([[1, 0, 2], [0, 0, 3]])
    assert A.shape == (2, 3)
    assert A.nnz == 3
    assert A[1, 2] == 3 and A[1, 0] == 0
    assert A.T.to_dense() == [[1, 0], [0, 0], [2, 3]]
    assert (A @ A.T).to_dense() == [[5, 6], [6, 9]]
    assert (A - A).is_zero
    assert A + SparseMatrix.zero(2, 3) == A
    assert SparseMatrix.identity(3) @ A.T == A.T
    assert A.scale(-1) == -A


def test_stack_blocks():
    I = SparseMatrix.identity(2)
    M = stack_blocks([2, 1], [2, 2], {(0, 0): I, (1, 1): SparseMatrix.from_dense([[5, 6]])})
    assert M.to_dense() == [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 5, 6]]


def test_snf_examples():
    assert smith_normal_form(SparseMatrix.from_dense([[2, 4], [6, 8]])) == ([2, 4], 2)
    assert smith_normal_form(SparseMatrix.from_dense([[2, 0], [0, 3]])) == ([1, 6], 2)
    assert smith_normal_form(SparseMatrix.zero(3, 2)) == ([], 0)


def test_invariant_factor_chain():
    assert invariant_factors_from_orders([2, 3]) == (6,)
    assert invariant_factors_from_orders([2, 2, 4]) == (2, 2, 4)
    assert invariant_factors_from_orders([]) == ()


@settings(max_examples=60, deadline=None)
@given(small_matrices())
def test_snf_matches_gcd_of_minors(dense):
    A = SparseMatrix.from_dense(dense)
    factors, r = smith_normal_form(A)
    assert factors == invariant_factors_by_minors(dense)
    assert r == sympy_rank(dense)


@settings(max_examples=60, deadline=None)
@given(small_matrices(), st.sampled_from([2, 3, 5]))
def test_rank_matches_reference(dense, p):
    A = SparseMatrix.from_dense(dense)
    assert rank_over_field(A, QQ) == sympy_rank(dense)
    assert rank_over_field(A, GF(p)) == sympy_rank(dense, p)


def test_rank_over_ring_rejects_int():
    with pytest.raises(ValueError):
        rank_over_field(SparseMatrix.identity(2), ZZ)
    assert rank(SparseMatrix.identity(2), ZZ) == 2


def test_rank_with_fractions():
    A = SparseMatrix.from_dense([[Fraction(1, 2), 1], [1, 2]])
    assert rank_over_field(A, QQ) == 1


def test_homology_pair_torsion():
    # Z --2--> Z --0--> 0 : homology Z/2
    d_in = SparseMatrix.from_dense([[2]])
    d_out = SparseMatrix.zero(0, 1)
    assert homology_pair(d_in, d_out) == AbelianGroupInvariants(0, (2,))
    assert homology_pair(d_in, d_out, QQ) == ZERO_GROUP
    assert homology_pair(d_in, d_out, GF(2)) == AbelianGroupInvariants(1)


def test_homology_pair_free():
    d_in = SparseMatrix.zero(3, 0)
    d_out = SparseMatrix.from_dense([[1, 1, 0]])
    assert homology_pair(d_in, d_out) == AbelianGroupInvariants(2)


def test_homology_pair_rejects_nonzero_composition():
    with pytest.raises(CompositionNotZero):
        homology_pair(SparseMatrix.identity(1), SparseMatrix.identity(1))
    with pytest.raises(ValueError):
        homology_pair(SparseMatrix.identity(2), SparseMatrix.identity(3))


def test_abelian_group_invariants():
    G = AbelianGroupInvariants.from_orders(1, [2, 3])
    assert G.torsion == (6,)
    assert str(G) == "Z + Z/6"
    assert str(ZERO_GROUP) == "0" and ZERO_GROUP.is_zero
    assert G + G == AbelianGroupInvariants(2, (6, 6))
    assert G.times(3) == AbelianGroupInvariants(3, (6, 6, 6))
    assert G.to_json() == {"free_rank": 1, "torsion": [6]}
    with pytest.raises(ValueError):
        AbelianGroupInvariants(0, (2, 3))
    with pytest.raises(ValueError):
        AbelianGroupInvariants(-1)
