import pytest

from koszul_cones.complexes import (
    BasisMismatch,
    C_complex,
    C_terms,
    M_complex,
    N_complex,
    apply_M,
    apply_N,
    build_psi,
    build_zeta,
    evaluate_M_pair,
    matrix_D,
    matrix_K,
    matrix_M,
    matrix_N_map,
    matrix_Gamma,
    matrix_gamma,
    matrix_of,
    realize,
    verify_complex,
)
from koszul_cones.errors import OutOfRange
from koszul_cones.exact_linalg import SparseMatrix
from koszul_cones.identities import lemma25_grid, lemma25_report
from koszul_cones.multilinear import Dims, MBasis, NBasis, basis_size, enumerate_basis, epsilon, pairing

SMALL = [Dims(e, g) for e in (1, 2) for g in (1, 2, 3)] + [Dims(3, 1), Dims(3, 2)]


def test_matrix_shapes():
    d = Dims(2, 3)
    assert matrix_K(d, 1, 1, 2).shape == (basis_size(d, "N", 2, 2, 1), basis_size(d, "N", 1, 1, 2))
    assert matrix_D(d, 2, 2, 1).shape == (basis_size(d, "M", 1, 1, 2), basis_size(d, "M", 2, 2, 1))
    assert matrix_M(d, 1, 0, 1).shape == (basis_size(d, "N", 1, 1, 1), basis_size(d, "M", 1, 0, 1))
    assert matrix_N_map(d, 0, 0, 1).shape == (basis_size(d, "N", 1, 1, 2), basis_size(d, "M", 0, 0, 1))
    assert matrix_gamma(d, "0e", 0).shape == (basis_size(d, "B", 0, 0, 2), basis_size(d, "M", 0, 2, 0))
    assert matrix_Gamma(d, "g0", 0).shape == (basis_size(d, "N", 3, 0, 3), basis_size(d, "B", 0, 0, 0))


def test_k_and_d_square_to_zero():
    d = Dims(2, 3)
    for m, n, p in [(0, 0, 3), (1, 2, 2), (2, 1, 4)]:
        assert (matrix_K(d, m + 1, n + 1, p - 1) @ matrix_K(d, m, n, p)).is_zero()
        assert (matrix_D(d, m - 1, n - 1, p + 1) @ matrix_D(d, m, n, p)).is_zero()


@pytest.mark.parametrize("dims", [Dims(2, 2), Dims(2, 3), Dims(3, 2)], ids=str)
def test_lemma25_duality(dims):
    for m, n, p in lemma25_grid(dims):
        assert lemma25_report(dims, m, n, p) == []


def test_lemma25_instance_e2_g2():
    # [K(S)](T) = S[D(T)] for T in M(1,1,0), S in N(0,0,1), matrix form under the pairing
    d = Dims(2, 2)
    K = matrix_K(d, 0, 0, 1)
    D = matrix_D(d, 1, 1, 0)
    N_tgt = enumerate_basis(d, "N", 1, 1, 0)
    M_src = enumerate_basis(d, "M", 1, 1, 0)
    S_basis = enumerate_basis(d, "N", 0, 0, 1)
    M_tgt = enumerate_basis(d, "M", 0, 0, 1)
    for a, S in enumerate(S_basis):
        for b, T in enumerate(M_src):
            left = sum(K[r, a] * pairing(T, N_tgt[r]) for r in range(len(N_tgt)))
            right = sum(D[r, b] * pairing(M_tgt[r], S) for r in range(len(M_tgt)))
            assert left == right


@pytest.mark.parametrize("dims", SMALL, ids=str)
def test_d_squared_zero_on_every_cone(dims):
    for r in range(dims.e + dims.g + 1):
        for s in range(-2, dims.alpha + 3):
            assert verify_complex(realize(C_complex(dims, r, s))) == [], (r, s)


def test_negative_control_breaks_d_squared():
    d = Dims(3, 3)
    assert verify_complex(realize(C_complex(d, 1, 1, negate_M=True))) != []
    assert verify_complex(realize(C_complex(d, 1, 1))) == []


def test_C_terms_out_of_range():
    with pytest.raises(OutOfRange):
        C_terms(Dims(2, 2), 5, 0)


def test_top_and_bottom_complexes_are_complexes():
    d = Dims(3, 3)
    for P, Q in [(2, 2), (3, 1), (1, 4)]:
        assert verify_complex(realize(N_complex(d, P, Q))) == []
        assert verify_complex(realize(M_complex(d, P, Q))) == []


@pytest.mark.parametrize("dims", [Dims(2, 2), Dims(2, 3), Dims(3, 2)], ids=str)
def test_m_map_matches_direct_evaluation(dims):
    # apply_M expands tau / bowtie constructively; evaluate_M_pair wedges every factor
    for which, fn in (("M", apply_M), ("N", apply_N)):
        for m in range(dims.g):
            for n in range(dims.e):
                for p in range(dims.size + 1):
                    q = dims.alpha - p + (which == "N")
                    tgt_m = dims.g - 1 - m - (which == "N")
                    for T in enumerate_basis(dims, "M", m, n, p):
                        image = fn(dims, T)
                        for Tp in enumerate_basis(dims, "M", tgt_m, dims.e - 1 - n, q):
                            S = NBasis(Tp.u, Tp.y, Tp.z)
                            assert image.get(S, 0) * epsilon(q) == evaluate_M_pair(dims, T, Tp, which)


@pytest.mark.parametrize("dims", [Dims(2, 2), Dims(2, 3), Dims(3, 2), Dims(3, 3)], ids=str)
def test_psi_commutes(dims):
    for r in range(1, dims.e + dims.g):
        for s in range(-1, dims.alpha + 2):
            _, bad, signs = build_psi(dims, r, s)
            assert bad == [], (r, s, signs)
            if r >= 2:
                assert signs == {"sign_M": 1, "sign_nu": 1}
            else:
                assert signs["sign_nu"] == 1


def test_zeta_small():
    for e, g in [(2, 2), (3, 2), (2, 3), (3, 3)]:
        z = build_zeta(Dims(e, g))
        assert all(isinstance(k, MBasis) for k in z)
    assert len(build_zeta(Dims(2, 2))) == 2
    assert len(build_zeta(Dims(3, 3))) == 6


def test_matrix_of_reports_missing_target():
    with pytest.raises(BasisMismatch):
        matrix_of(lambda b: {"elsewhere": 1}, ["a"], ["b"])


def test_sparse_result_type():
    assert isinstance(matrix_M(Dims(2, 2), 0, 0, 0), SparseMatrix)
