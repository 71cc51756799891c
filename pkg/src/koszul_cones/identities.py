"""Exhaustive checks of the multilinear identities behind the complexes.

Each ``*_report`` function runs one identity over every basis choice in a
small parameter range and returns the list of failing inputs (empty when
the identity holds).  Elements of the exterior algebra on E (x) G* are
dicts {sorted squares: coefficient}; elements of D G* are dicts
{exponent tuple: coefficient}.  Indices j, l passed to tau/L/Upsilon are
1-based, everything else is 0-based.
"""

from __future__ import annotations

from itertools import combinations

from .complexes import (
    apply_D,
    apply_K,
    apply_M,
    apply_xg_M,
    apply_xg_N,
    build_psi,
)
from .multilinear import (
    Dims,
    MBasis,
    NBasis,
    add_term,
    bowtie_DE,
    bowtie_ED,
    compositions,
    contract_divided,
    enumerate_basis,
    interior,
    omega_E,
    omega_Gstar,
    pairing,
    proj_L,
    proj_Upsilon,
    sym_multiply,
    tau,
    wedge_elements,
)


def _combine(*terms) -> dict:
    out: dict = {}
    for coeff, el in terms:
        for k, c in el.items():
            add_term(out, k, coeff * c)
    return out


def x_of_omega_G(dims: Dims, j: int) -> tuple[int, tuple]:
    """x_j (0-based) contracted into y_1 ^ ... ^ y_g: (sign, remaining columns)."""
    return interior(j, omega_Gstar(dims))


def integrate(Y: tuple, j: int) -> tuple:
    """Raise the j-th (0-based) divided exponent by one, coefficient 1."""
    return sym_multiply(j, Y)


# ---------------------------------------------------------------------------
# bowtie identities


def obs213_report(dims: Dims, m_max: int = 2) -> list:
    """U bowtie (y ^ Y) = sum_k (u_k (x) y) ^ (v_k(U) bowtie Y) for U in D_{m+1}E, Y in wedge^m G*."""
    e, g = dims.e, dims.g
    bad = []
    for m in range(m_max + 1):
        for U in compositions(m + 1, e):
            for y in range(g):
                for Y in combinations(range(g), m):
                    lhs = bowtie_DE(dims, U, (y,) + Y)
                    rhs: dict = {}
                    for k in range(e):
                        V = contract_divided(k, U)
                        if V is None:
                            continue
                        term = wedge_elements({(k * g + y,): 1}, bowtie_DE(dims, V, Y))
                        rhs = _combine((1, rhs), (1, term))
                    if lhs != rhs:
                        bad.append((U, y, Y))
    return bad


def lemma32_report(dims: Dims, m_max: int = 2) -> list:
    """sum_l (omega_E bowtie x_l(Y)) ^ (U bowtie (y_l ^ y)) = 0 for Y in D_{e+1}G*, U in D_{m+1}E, y in wedge^m G*."""
    e, g = dims.e, dims.g
    bad = []
    oE = omega_E(dims)
    for m in range(m_max + 1):
        for Y in compositions(e + 1, g):
            for U in compositions(m + 1, e):
                for y in combinations(range(g), m):
                    total: dict = {}
                    for l in range(g):
                        XY = contract_divided(l, Y)
                        if XY is None:
                            continue
                        term = wedge_elements(bowtie_ED(dims, oE, XY), bowtie_DE(dims, U, (l,) + y))
                        total = _combine((1, total), (1, term))
                    if total:
                        bad.append((Y, U, y))
    return bad


def cor33a_report(dims: Dims) -> list:
    """(omega_E bowtie Y) ^ (U bowtie omega_G*) = 0 for Y in D_eG*, U in D_gE."""
    bad = []
    oE, oG = omega_E(dims), omega_Gstar(dims)
    for Y in compositions(dims.e, dims.g):
        for U in compositions(dims.g, dims.e):
            if wedge_elements(bowtie_ED(dims, oE, Y), bowtie_DE(dims, U, oG)):
                bad.append((Y, U))
    return bad


def _omega_bowtie_x_omega(dims: Dims, Ydiv: tuple, U: tuple, j: int) -> dict:
    """(omega_E bowtie Ydiv) ^ (U bowtie x_j(omega_G*))."""
    sign, rest = x_of_omega_G(dims, j)
    return _combine((sign, wedge_elements(bowtie_ED(dims, omega_E(dims), Ydiv), bowtie_DE(dims, U, rest))))


def cor33b_report(dims: Dims) -> list:
    """(omega_E bowtie x(Y)) ^ (U bowtie x'(omega_G*)) is symmetric in x, x'."""
    bad = []
    g = dims.g
    for Y in compositions(dims.e + 1, g):
        for U in compositions(g - 1, dims.e):
            for a in range(g):
                for b in range(a + 1, g):
                    Ya, Yb = contract_divided(a, Y), contract_divided(b, Y)
                    left = _omega_bowtie_x_omega(dims, Ya, U, b) if Ya is not None else {}
                    right = _omega_bowtie_x_omega(dims, Yb, U, a) if Yb is not None else {}
                    if left != right:
                        bad.append((Y, U, a, b))
    return bad


def cor33c_report(dims: Dims) -> list:
    """x_j(Y) = 0 forces (omega_E bowtie Y) ^ (U bowtie x_j(omega_G*)) = 0, Y in D_eG*, U in D_{g-1}E."""
    bad = []
    for Y in compositions(dims.e, dims.g):
        for U in compositions(dims.g - 1, dims.e):
            for j in range(dims.g):
                if contract_divided(j, Y) is None and _omega_bowtie_x_omega(dims, Y, U, j):
                    bad.append((Y, U, j))
    return bad


def example211_report(dims: Dims) -> list:
    """(omega_E bowtie int Y' dy_j) ^ (U bowtie x_j(omega_G*)) does not depend on j."""
    bad = []
    for Yp in compositions(dims.e - 1, dims.g):
        for U in compositions(dims.g - 1, dims.e):
            values = [_omega_bowtie_x_omega(dims, integrate(Yp, j), U, j) for j in range(dims.g)]
            if any(v != values[0] for v in values[1:]):
                bad.append((Yp, U))
    return bad


# ---------------------------------------------------------------------------
# tau, L, Upsilon


def _el(mono) -> dict:
    return {} if mono is None else {mono: 1}


def _x(l: int, el: dict) -> dict:
    """x_l (1-based) on a D G* element."""
    out: dict = {}
    for mono, c in el.items():
        r = contract_divided(l - 1, mono)
        if r is not None:
            add_term(out, r, c)
    return out


def _product_disjoint(a, b) -> dict:
    """Product in D G* of monomials with disjoint supports (coefficient 1)."""
    if a is None or b is None:
        return {}
    assert all(x == 0 or y == 0 for x, y in zip(a, b))
    return {tuple(x + y for x, y in zip(a, b)): 1}


def _tau_el(j, Yp, Y) -> dict:
    if Yp is None or Y is None:
        return {}
    return _el(tau(j, Yp, Y))


def lemma36_report(g_max: int = 4, deg_max: int = 3) -> dict:
    """Failures of the four exchange rules for tau_j, keyed 'a'..'d'."""
    bad = {"a": [], "b": [], "c": [], "d": []}
    for g in range(1, g_max + 1):
        monos = [Y for d in range(deg_max + 1) for Y in compositions(d, g)]
        for Yp in monos:
            for Y in monos:
                for j in range(1, g + 1):
                    base = _tau_el(j, Yp, Y)
                    for l in range(1, g + 1):
                        if l < j:
                            lhs = _tau_el(j, contract_divided(l - 1, Yp), Y)
                            if lhs != _x(l, base):
                                bad["a"].append((g, Yp, Y, j, l))
                        if j < l:
                            lhs = _tau_el(j, Yp, contract_divided(l - 1, Y))
                            if lhs != _x(l, base):
                                bad["c"].append((g, Yp, Y, j, l))
                    xb = _x(j, base)
                    rhs_b = _combine(
                        (1, _tau_el(j, contract_divided(j - 1, Yp), Y)),
                        (1, _product_disjoint(proj_Upsilon(j, Yp), proj_L(j - 1, Y))),
                    )
                    if xb != rhs_b:
                        bad["b"].append((g, Yp, Y, j))
                    rhs_d = _combine(
                        (1, _tau_el(j, Yp, contract_divided(j - 1, Y))),
                        (1, _product_disjoint(proj_Upsilon(j + 1, Yp), proj_L(j, Y))),
                    )
                    if xb != rhs_d:
                        bad["d"].append((g, Yp, Y, j))
    return bad


# ---------------------------------------------------------------------------
# K and D are dual


def lemma25_report(dims: Dims, m: int, n: int, p: int) -> list:
    """[K(S)](T) = (-1)^p S[D(T)] for T in M(m,n,p), S in N(m-1,n-1,p+1)."""
    sign = -1 if p % 2 else 1
    left: dict = {}
    for S in enumerate_basis(dims, "N", m - 1, n - 1, p + 1):
        for N, c in apply_K(dims, S).items():
            # the only M-basis element pairing nontrivially with N carries the same data
            T = MBasis(N.v, N.x, N.w)
            add_term(left, (T, S), c * pairing(T, N))
    right: dict = {}
    for T in enumerate_basis(dims, "M", m, n, p):
        for Mb, c in apply_D(dims, T).items():
            S = NBasis(Mb.u, Mb.y, Mb.z)
            add_term(right, (T, S), sign * c * pairing(Mb, S))
    return sorted(set(left.items()) ^ set(right.items()), key=repr)


def lemma25_grid(dims: Dims, total: int = 4):
    """(m, n, p) with m+p <= total and all modules nonzero."""
    for p in range(0, dims.size):
        for m in range(1, total - p + 1):
            for n in range(1, total + 1):
                yield m, n, p


# ---------------------------------------------------------------------------
# the comparison maps and why r=1, r=e+g need B summands


def psi_report(dims: Dims, s_range=None) -> list:
    """(r, s, bad positions) wherever psi: C^{r,s} -> C^{r-1,s} fails to commute."""
    if s_range is None:
        s_range = range(-2, dims.alpha + 3)
    bad = []
    for r in range(1, dims.e + dims.g):
        for s in s_range:
            _, broken, _ = build_psi(dims, r, s)
            if broken:
                bad.append((r, s, broken))
    return bad


def _compose(second, first, dims, basis) -> dict:
    out: dict = {}
    for T in basis:
        for mid, c in first(dims, T).items():
            for tgt, d in second(dims, mid).items():
                add_term(out, (T, tgt), c * d)
    return out


def remark310_report(dims: Dims) -> dict:
    """Per p, whether x_g . M_{g-1} on M(g-1,0,p) and M_0 . x_g on M(0,e,p) are nonzero.

    Both compositions should be nonzero for some p; this is why C^{0,s} and
    C^{e+g,s} carry B summands.
    """
    e, g = dims.e, dims.g
    first, second = {}, {}
    for p in range(0, dims.size + 1):
        basis = enumerate_basis(dims, "M", g - 1, 0, p)
        if basis:
            first[p] = bool(_compose(apply_xg_N, apply_M, dims, basis))
        basis = enumerate_basis(dims, "M", 0, e, p)
        if basis:
            second[p] = bool(_compose(apply_M, apply_xg_M, dims, basis))
    return {"xg_after_M": first, "M_after_xg": second}


def remark310_holds(dims: Dims) -> bool:
    rep = remark310_report(dims)
    return any(rep["xg_after_M"].values()) and any(rep["M_after_xg"].values())


__all__ = [
    "cor33a_report",
    "cor33b_report",
    "cor33c_report",
    "example211_report",
    "integrate",
    "lemma25_grid",
    "lemma25_report",
    "lemma32_report",
    "lemma36_report",
    "obs213_report",
    "psi_report",
    "remark310_holds",
    "remark310_report",
    "x_of_omega_G",
]
