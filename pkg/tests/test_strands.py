from math import comb, factorial

import pytest

from koszul_cones.complexes import C_complex, M_complex, N_complex, realize
from koszul_cones.errors import DegreeMismatch
from koszul_cones.exact_linalg import GF, QQ, ZZ, AbelianGroupInvariants
from koszul_cones.homology import complex_homology
from koszul_cones.multilinear import Dims
from koszul_cones.strands import (
    ChessboardComplex,
    MultiDegree,
    canonical_key,
    chessboard_complex,
    content_violations,
    default_symmetry,
    iter_strands,
    orbit_size,
    simplicial_reduced_homology,
    strand_basis,
    strand_complex,
    strand_keys,
)


def specs(d):
    e, g = d.e, d.g
    return [
        N_complex(d, 2, 2),
        N_complex(d, 3, 1),
        M_complex(d, 2, 1),
        C_complex(d, 0, 1),
        C_complex(d, 1, 1),
        C_complex(d, 2, 0),
        C_complex(d, e + g, d.alpha),
        C_complex(d, 1, 1, negate_M=True),
    ]


@pytest.mark.parametrize("d", [Dims(2, 2), Dims(2, 3), Dims(3, 2)], ids=str)
def test_content_is_conserved(d):
    for spec in specs(d):
        assert content_violations(realize(spec)) == [], spec.label


@pytest.mark.parametrize("d", [Dims(2, 2), Dims(2, 3), Dims(3, 2)], ids=str)
@pytest.mark.parametrize("symmetry", ["none", None])
def test_strand_dimensions_sum_to_full(d, symmetry):
    for spec in specs(d):
        full = realize(spec)
        totals = {i: 0 for i in full.positions()}
        for _, mult, cx in iter_strands(spec, symmetry):
            for i in cx.positions():
                totals[i] += mult * cx.dim(i)
        assert totals == {i: full.dim(i) for i in full.positions()}, spec.label


@pytest.mark.parametrize("ring", [ZZ, QQ, GF(2)], ids=str)
def test_strand_homology_sums_to_full(ring):
    d = Dims(3, 3)
    for spec in (N_complex(d, 3, 3), M_complex(d, 2, 3), C_complex(d, 2, 1)):
        full = realize(spec)
        for i in full.positions():
            total = AbelianGroupInvariants(0)
            for _, mult, cx in iter_strands(spec):
                total = total + complex_homology(cx, i, ring).times(mult)
            assert total == complex_homology(full, i, ring), (spec.label, i)


def test_symmetry_choice():
    d = Dims(3, 3)
    assert default_symmetry(N_complex(d, 1, 1)) == "full"
    assert default_symmetry(C_complex(d, 0, 0)) == "full"
    assert default_symmetry(C_complex(d, 6, 0)) == "full"
    assert default_symmetry(C_complex(d, 2, 0)) == "rows"
    assert default_symmetry(C_complex(d, 2, 0, negate_M=True)) == "none"


def test_orbits():
    k = MultiDegree((1, 0, 1), (2, 0, 0))
    assert canonical_key(k, "full") == MultiDegree((1, 1, 0), (2, 0, 0))
    assert canonical_key(k, "rows") == MultiDegree((1, 1, 0), (2, 0, 0))
    assert canonical_key(MultiDegree((0, 1), (0, 2)), "rows") == MultiDegree((1, 0), (0, 2))
    assert orbit_size(k, "full") == 9
    assert orbit_size(k, "rows") == 3
    assert orbit_size(k, "none") == 1
    keys = strand_keys(N_complex(Dims(2, 2), 1, 1))
    assert sum(mult for _, mult in keys) == len(strand_keys(N_complex(Dims(2, 2), 1, 1), "none"))


def test_strand_of_N22_is_chessboard():
    d = Dims(2, 2)
    key = MultiDegree((1, 1), (1, 1))
    cx = strand_complex(N_complex(d, 2, 2), key)
    # position p holds the p-square partial matchings
    assert [cx.dim(p) for p in range(3)] == [1, 4, 2]


def test_strand_basis_checks_shape():
    d = Dims(2, 2)
    spec = N_complex(d, 1, 1)
    with pytest.raises(DegreeMismatch):
        strand_basis(d, spec.params, spec.terms[0][0], MultiDegree((1,), (1, 1)))


def test_chessboard_small():
    sc = chessboard_complex((1, 1), (1, 1))
    assert sc.f_vector() == [4, 2]
    assert sc.reduced_homology(0) == AbelianGroupInvariants(1)
    assert sc.reduced_homology(-1) == AbelianGroupInvariants(0)
    assert chessboard_complex((2, 2), (2, 2)).reduced_homology(0).is_zero


def test_full_simplex_is_acyclic():
    sc = ChessboardComplex((3, 3), (2, 2, 2))
    assert sc.f_vector() == [comb(6, k + 1) for k in range(6)]
    for k in range(-1, 6):
        assert sc.reduced_homology(k).is_zero


@pytest.mark.parametrize("e,g", [(2, 3), (3, 3), (3, 4), (5, 5)])
def test_matching_complex_f_vector(e, g):
    fv = chessboard_complex((1,) * e, (1,) * g).f_vector()
    assert fv == [comb(e, k + 1) * comb(g, k + 1) * factorial(k + 1) for k in range(min(e, g))]


def test_delta55_has_three_torsion():
    sc = chessboard_complex((1,) * 5, (1,) * 5)
    assert sc.f_vector() == [25, 200, 600, 600, 120]
    assert simplicial_reduced_homology(sc, 2, ZZ) == AbelianGroupInvariants(0, (3,))
    assert sc.reduced_homology(2, GF(3)).free_rank == 1
    assert sc.reduced_homology(2, QQ).free_rank == 0


def test_negative_bounds_rejected():
    with pytest.raises(DegreeMismatch):
        ChessboardComplex((1, -1), (1, 1))
