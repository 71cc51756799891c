import pytest

from koszul_cones.identities import (
    cor33a_report,
    cor33b_report,
    cor33c_report,
    example211_report,
    integrate,
    lemma25_grid,
    lemma25_report,
    lemma32_report,
    lemma36_report,
    obs213_report,
    psi_report,
    remark310_holds,
    remark310_report,
    x_of_omega_G,
)
from koszul_cones.multilinear import Dims

SMALL = [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2), (3, 3)]


def test_helpers():
    d = Dims(2, 3)
    assert x_of_omega_G(d, 0) == (1, (1, 2))
    assert x_of_omega_G(d, 1) == (-1, (0, 2))
    assert integrate((1, 0), 1) == (1, 1)


@pytest.mark.parametrize("e,g", SMALL)
def test_bowtie_expansion(e, g):
    assert obs213_report(Dims(e, g)) == []


@pytest.mark.parametrize("e,g", SMALL)
def test_bowtie_vanishing_identities(e, g):
    d = Dims(e, g)
    assert lemma32_report(d) == []
    assert cor33a_report(d) == []
    assert cor33b_report(d) == []
    assert cor33c_report(d) == []
    assert example211_report(d) == []


def test_tau_exchange_rules():
    assert lemma36_report() == {"a": [], "b": [], "c": [], "d": []}


@pytest.mark.parametrize("e,g", [(1, 2), (2, 2), (2, 3), (3, 2)])
def test_K_and_D_are_dual(e, g):
    d = Dims(e, g)
    for m, n, p in lemma25_grid(d, total=3):
        assert lemma25_report(d, m, n, p) == [], (m, n, p)


@pytest.mark.parametrize("e,g", [(1, 1), (2, 1), (2, 2), (2, 3)])
def test_comparison_maps_commute(e, g):
    assert psi_report(Dims(e, g)) == []


@pytest.mark.parametrize("e,g", [(2, 2), (2, 3), (3, 3)])
def test_end_compositions_do_not_vanish(e, g):
    d = Dims(e, g)
    assert remark310_holds(d)
    rep = remark310_report(d)
    assert set(rep) == {"xg_after_M", "M_after_xg"}
