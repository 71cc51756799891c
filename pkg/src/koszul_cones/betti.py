"""Graded Betti numbers of the Segre modules M_ell and the symmetries among them.

beta_{p,q}(M_ell) = dim H_N(q-p+ell, q-p, p) over a field, computed strand by
strand.  The checks here compare homology groups or Betti numbers that are
predicted to agree: strand duality, the e=3 / g=3 dualities, transpose
symmetry when e=g, and the Cohen-Macaulay symmetry.
"""

from __future__ import annotations

from .errors import DegreeMismatch, HypothesisViolation
from .exact_linalg import QQ, ZZ, ScalarRing
from .homology import homology_M, homology_N, in_duality_band, strand_homology
from .multilinear import Dims, compositions
from .strands import MultiDegree, chessboard_complex


def betti_number(dims: Dims, p: int, q: int, ell: int, field: ScalarRing = QQ) -> int:
    if not field.is_field:
        raise ValueError(f"Betti numbers need a field, got {field}")
    m, n = q - p + ell, q - p
    if m < 0 or n < 0 or p < 0:
        return 0
    return homology_N(dims, m, n, p, field, strands=True).dimension


def table_range(dims: Dims, ell: int, p_max: int | None = None, extra: int = 2):
    """(p, q) pairs searched by betti_table: 0 <= p <= p_max and n = q-p up to max(0,-ell)+extra."""
    if p_max is None:
        p_max = dims.e * dims.g
    n_top = max(0, -ell) + extra
    for p in range(p_max + 1):
        for n in range(max(0, -ell), n_top + 1):
            yield p, p + n


def betti_table(dims: Dims, ell: int, field: ScalarRing = QQ, p_max: int | None = None, extra: int = 2) -> dict:
    """Nonzero beta_{p,q}(M_ell) over the searched range, keyed by (p, q)."""
    out = {}
    for p, q in table_range(dims, ell, p_max, extra):
        b = betti_number(dims, p, q, ell, field)
        if b:
            out[(p, q)] = b
    return dict(sorted(out.items()))


def bh_rr_bridge_check(dims: Dims, md: MultiDegree, ell: int, p: int) -> bool:
    """The (gamma,delta) strand of Tor_p(M_ell) equals reduced H_{p-1} of the chessboard complex."""
    gamma, delta = tuple(md.gamma), tuple(md.delta)
    if len(gamma) != dims.e or len(delta) != dims.g:
        raise DegreeMismatch("multidegree has the wrong shape")
    m, n = sum(gamma) - p, sum(delta) - p
    if m - n != ell:
        raise DegreeMismatch(f"|gamma|-|delta|={m - n} does not match ell={ell}")
    if m < 0 or n < 0:
        raise DegreeMismatch("multidegree too small for this homological degree")
    tor = strand_homology(dims, "N", m, n, p, MultiDegree(gamma, delta), ZZ)
    simplicial = chessboard_complex(gamma, delta).reduced_homology(p - 1, ZZ)
    return tor == simplicial


def thm61_partner(dims: Dims, m: int, n: int, p: int) -> tuple[int, int, int]:
    return dims.g - 1 - m, dims.e - 1 - n, dims.alpha - p


def thm61_check(
    dims: Dims, m: int, n: int, p: int, md: MultiDegree, md_partner: MultiDegree, force: bool = False
) -> bool:
    """H_M(m,n,p) on strand md agrees with H_N(m',n',p') on strand md_partner.

    Requires 1-e <= m-n <= g-1 unless ``force``.
    """
    if not force and not in_duality_band(dims, m, n):
        raise HypothesisViolation(f"m-n={m - n} outside [{1 - dims.e}, {dims.g - 1}]")
    a, c = tuple(md.gamma), tuple(md.delta)
    b, d = tuple(md_partner.gamma), tuple(md_partner.delta)
    if len(a) != dims.e or len(b) != dims.e or len(c) != dims.g or len(d) != dims.g:
        raise DegreeMismatch("multidegree has the wrong shape")
    if any(x + y != dims.g - 1 for x, y in zip(a, b)) or any(x + y != dims.e - 1 for x, y in zip(c, d)):
        raise HypothesisViolation("strands are not complementary")
    mp, np_, pp = thm61_partner(dims, m, n, p)
    left = strand_homology(dims, "M", m, n, p, MultiDegree(a, c), ZZ)
    right = strand_homology(dims, "N", mp, np_, pp, MultiDegree(b, d), ZZ)
    return left == right


def thm61_sweep(dims: Dims, m: int, n: int, p: int, force: bool = False) -> list:
    """Strands of H_M(m,n,p) that disagree with their complementary H_N strand.

    Strands with no complement (a content entry above g-1 or e-1) must carry
    zero homology.
    """
    if not force and not in_duality_band(dims, m, n):
        raise HypothesisViolation(f"m-n={m - n} outside [{1 - dims.e}, {dims.g - 1}]")
    bad = []
    if m + p < 0 or n + p < 0:
        return bad
    for a in compositions(m + p, dims.e):
        for c in compositions(n + p, dims.g):
            md = MultiDegree(a, c)
            if max(a, default=0) > dims.g - 1 or max(c, default=0) > dims.e - 1:
                if not strand_homology(dims, "M", m, n, p, md, ZZ).is_zero:
                    bad.append(md)
                continue
            partner = MultiDegree(tuple(dims.g - 1 - x for x in a), tuple(dims.e - 1 - x for x in c))
            if not thm61_check(dims, m, n, p, md, partner, force=True):
                bad.append(md)
    return bad


# ---------------------------------------------------------------------------
# the e=3 and g=3 dualities


def cor62_hypothesis(dims: Dims, P: int, Q: int, side: str) -> bool:
    if side == "e3":
        return dims.e == 3 and Q - 2 <= P <= 2 * Q - 1
    if side == "g3":
        return dims.g == 3 and P - 2 <= Q <= 2 * P - 1
    raise ValueError(f"side must be 'e3' or 'g3', got {side!r}")


def cor62_pairs(P: int, Q: int, side: str):
    """((m,n,p), (m',n',p')) for every module of M(P,Q)."""
    for p in range(0, min(P, Q) + 1):
        m, n = P - p, Q - p
        if side == "e3":
            yield (m, n, p), (Q - 1 - m, 2 - n, 2 * Q - 2 - p)
        else:
            yield (m, n, p), (2 - m, P - 1 - n, 2 * P - 2 - p)


def cor62_report(dims: Dims, P: int, Q: int, side: str) -> list:
    if not cor62_hypothesis(dims, P, Q, side):
        raise HypothesisViolation(f"(P,Q)=({P},{Q}) outside the range for side {side} at e={dims.e}, g={dims.g}")
    bad = []
    for (m, n, p), (mp, np_, pp) in cor62_pairs(P, Q, side):
        hm = homology_M(dims, m, n, p, ZZ, strands=True).invariants
        if min(mp, np_, pp) < 0:
            hn = None
            ok = hm.is_zero
        else:
            hn = homology_N(dims, mp, np_, pp, ZZ, strands=True).invariants
            ok = hm == hn
        if not ok:
            bad.append(((m, n, p), (mp, np_, pp), str(hm), str(hn)))
    return bad


def cor62_check(dims: Dims, P: int, Q: int, side: str = "e3") -> bool:
    return not cor62_report(dims, P, Q, side)


def cor62_grid(dims: Dims, side: str, total: int):
    """All (P, Q) with P+Q <= total satisfying the hypothesis of ``side``."""
    for P in range(0, total + 1):
        for Q in range(0, total + 1 - P):
            if cor62_hypothesis(dims, P, Q, side):
                yield P, Q


def cor63_hypothesis(dims: Dims, ell: int, q: int, side: str) -> bool:
    if side == "e3":
        return dims.e == 3 and -2 <= ell <= q - 1
    if side == "g3":
        return dims.g == 3 and ell <= 2 and 1 - 2 * ell <= q
    raise ValueError(f"side must be 'e3' or 'g3', got {side!r}")


def cor63_partner(ell: int, p: int, q: int, side: str) -> tuple[int, int, int]:
    """(ell', p', q') paired with (ell, p, q)."""
    if side == "e3":
        return q - 3 - ell, 2 * q - 2 - p, q
    return 3 - 2 * ell - q, 2 * (ell + q - 1) - p, 3 * (ell + q - 1) - q


def cor63_report(dims: Dims, ell: int, q: int, side: str = "e3", field: ScalarRing = QQ) -> list:
    if not cor63_hypothesis(dims, ell, q, side):
        raise HypothesisViolation(f"(ell,q)=({ell},{q}) outside the range for side {side}")
    bad = []
    for p in range(0, dims.e * dims.g + 1):
        lp, pp, qp = cor63_partner(ell, p, q, side)
        left = betti_number(dims, p, q, ell, field)
        right = betti_number(dims, pp, qp, lp, field)
        if left != right:
            bad.append(((ell, p, q), (lp, pp, qp), left, right))
    return bad


def cor63_check(dims: Dims, ell: int, q: int, side: str = "e3", field: ScalarRing = QQ) -> bool:
    return not cor63_report(dims, ell, q, side, field)


# ---------------------------------------------------------------------------
# symmetries of Betti tables given as {(ell, p, q): beta}


def transpose_partner(ell: int, p: int, q: int) -> tuple[int, int, int]:
    """Swapping E* and G (e=g) relates M_ell and M_-ell."""
    return -ell, p, q + ell


def cm_hypothesis(dims: Dims, ell: int) -> bool:
    return 1 - dims.e <= ell <= dims.g - 1


def cm_partner(dims: Dims, ell: int, p: int, q: int) -> tuple[int, int, int]:
    """Partner under the duality of Cohen-Macaulay Segre modules."""
    return dims.g - dims.e - ell, dims.alpha - p, (dims.e - 1) * dims.g - q


def symmetry_report(dims: Dims, table: dict, kind: str) -> list:
    """Entries of ``table`` ({(ell,p,q): beta}, zeros omitted) whose partner disagrees.

    Partners outside the ells covered by ``table`` are skipped.
    """
    ells = {k[0] for k in table}
    bad = []
    for (ell, p, q), b in sorted(table.items()):
        partner = applicable_partner(dims, kind, ell, p, q)
        if partner is None or partner[0] not in ells:
            continue
        other = table.get(partner, 0)
        if other != b:
            bad.append(((ell, p, q), partner, b, other))
    return bad


def applicable_partner(dims: Dims, kind: str, ell: int, p: int, q: int):
    """Partner of (ell,p,q) under symmetry ``kind`` when its hypotheses hold, else None."""
    if kind == "transpose":
        return transpose_partner(ell, p, q) if dims.e == dims.g else None
    if kind == "cm":
        return cm_partner(dims, ell, p, q) if cm_hypothesis(dims, ell) else None
    if kind in ("e3", "g3"):
        if not cor63_hypothesis(dims, ell, q, kind):
            return None
        lp, pp, qp = cor63_partner(ell, p, q, kind)
        return lp, pp, qp
    raise ValueError(f"unknown symmetry {kind!r}")


def only_transpose(dims: Dims, ell: int, p: int, q: int) -> bool:
    """True when no symmetry other than transposition has its hypotheses met at (ell,p,q)."""
    return all(applicable_partner(dims, k, ell, p, q) is None for k in ("cm", "e3", "g3"))


__all__ = [
    "applicable_partner",
    "betti_number",
    "betti_table",
    "bh_rr_bridge_check",
    "cm_partner",
    "cm_hypothesis",
    "cor62_check",
    "cor62_grid",
    "cor62_hypothesis",
    "cor62_pairs",
    "cor62_report",
    "cor63_check",
    "cor63_hypothesis",
    "cor63_partner",
    "cor63_report",
    "only_transpose",
    "symmetry_report",
    "table_range",
    "thm61_check",
    "thm61_partner",
    "thm61_sweep",
    "transpose_partner",
]
