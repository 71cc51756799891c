"""Homology of N(P,Q), M(P,Q) and C^{r,s}, and the checks built on it:
the duality H_N(m,n,p) = H_M(g-1-m, e-1-n, alpha-p), split exactness of
C^{r,s}, and the generator zeta.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .complexes import (
    ChainComplex,
    C_complex,
    M_complex,
    N_complex,
    apply_D,
    apply_M,
    apply_linear,
    build_zeta,
    realize,
    verify_complex,
)
from .errors import CompositionNotZero, HypothesisViolation, OutOfRange
from .exact_linalg import (
    QQ,
    ZERO_GROUP,
    ZZ,
    AbelianGroupInvariants,
    GF,
    ScalarRing,
    homology_pair,
)
from .multilinear import Dims, NBasis, basis_size
from .strands import MultiDegree, iter_strands, strand_complex

log = logging.getLogger(__name__)

DEFAULT_STRAND_THRESHOLD = 200_000


@dataclass(frozen=True)
class HomologyResult:
    side: str
    m: int
    n: int
    p: int
    ring: ScalarRing
    invariants: AbelianGroupInvariants

    @property
    def dimension(self) -> int:
        return self.invariants.free_rank

    def to_json(self) -> dict:
        return {
            "side": self.side,
            "m": self.m,
            "n": self.n,
            "p": self.p,
            "ring": str(self.ring),
            "free_rank": self.invariants.free_rank,
            "torsion": list(self.invariants.torsion),
        }


def complex_homology(cx: ChainComplex, i: int, ring: ScalarRing = ZZ) -> AbelianGroupInvariants:
    """Homology at position i of an assembled complex."""
    if cx.dim(i) == 0:
        return ZERO_GROUP
    return homology_pair(cx.differential(i + 1), cx.differential(i), ring)


def _position(side: str, m: int, n: int, p: int) -> int:
    return p if side == "N" else m + n + p + 1


def _spec(dims: Dims, side: str, m: int, n: int, p: int):
    builder = N_complex if side == "N" else M_complex
    return builder(dims, m + p, n + p)


def _trimmed(spec, pos: int):
    """Keep only positions pos-1, pos, pos+1 so strands build three bases, not all."""
    keep = {i: spec.terms[i] for i in (pos - 1, pos, pos + 1) if i in spec.terms}
    blocks = {i: spec.blocks[i] for i in (pos, pos + 1) if i in spec.blocks and i in keep and i - 1 in keep}
    return type(spec)(spec.dims, spec.label, keep, blocks, spec.params)


def homology(
    dims: Dims,
    side: str,
    m: int,
    n: int,
    p: int,
    ring: ScalarRing = ZZ,
    strands: bool | None = None,
    threshold: int = DEFAULT_STRAND_THRESHOLD,
) -> HomologyResult:
    """H_N(m,n,p) (side 'N') or H_M(m,n,p) (side 'M') over ``ring``.

    With ``strands=None`` the strand decomposition is used whenever the
    three modules involved exceed ``threshold`` basis elements in total.
    """
    if side not in ("N", "M"):
        raise ValueError(f"side must be 'N' or 'M', got {side!r}")
    if basis_size(dims, side, m, n, p) == 0:
        return HomologyResult(side, m, n, p, ring, ZERO_GROUP)
    pos = _position(side, m, n, p)
    spec = _trimmed(_spec(dims, side, m, n, p), pos)
    if strands is None:
        sizes = sum(basis_size(dims, side, m + k, n + k, p - k) for k in (-1, 0, 1))
        strands = sizes > threshold
    if not strands:
        cx = realize(spec)
        return HomologyResult(side, m, n, p, ring, complex_homology(cx, pos, ring))
    total = ZERO_GROUP
    for key, mult, cx in iter_strands(spec):
        h = complex_homology(cx, pos, ring)
        if not h.is_zero:
            total = total + h.times(mult)
    return HomologyResult(side, m, n, p, ring, total)


def homology_N(dims: Dims, m: int, n: int, p: int, ring: ScalarRing = ZZ, **kw) -> HomologyResult:
    return homology(dims, "N", m, n, p, ring, **kw)


def homology_M(dims: Dims, m: int, n: int, p: int, ring: ScalarRing = ZZ, **kw) -> HomologyResult:
    return homology(dims, "M", m, n, p, ring, **kw)


def strand_homology(dims: Dims, side: str, m: int, n: int, p: int, key: MultiDegree, ring: ScalarRing = ZZ):
    """Homology of the strand ``key`` of N(m+p,n+p) or M(m+p,n+p) at the given module."""
    pos = _position(side, m, n, p)
    cx = strand_complex(_trimmed(_spec(dims, side, m, n, p), pos), key)
    return complex_homology(cx, pos, ring)


def in_duality_band(dims: Dims, m: int, n: int) -> bool:
    return 1 - dims.e <= m - n <= dims.g - 1


def check_duality(dims: Dims, m: int, n: int, p: int, force: bool = False) -> bool:
    """H_N(m,n,p) and H_M(g-1-m, e-1-n, alpha-p) have equal invariants over ZZ."""
    if not force and not in_duality_band(dims, m, n):
        raise HypothesisViolation(f"m-n={m - n} outside [{1 - dims.e}, {dims.g - 1}]")
    hn = homology_N(dims, m, n, p, ZZ, strands=True)
    hm = homology_M(dims, dims.g - 1 - m, dims.e - 1 - n, dims.alpha - p, ZZ, strands=True)
    return hn.invariants == hm.invariants


def split_exact_report(dims: Dims, r: int, s: int, ring: ScalarRing = ZZ) -> list[tuple]:
    """Every (strand, position, homology) where C^{r,s} fails to be exact."""
    if not 0 <= r <= dims.e + dims.g:
        raise OutOfRange(f"r={r} outside 0..{dims.e + dims.g}")
    spec = C_complex(dims, r, s)
    bad = []
    for key, _, cx in iter_strands(spec):
        broken = verify_complex(cx)
        if broken:
            raise CompositionNotZero(f"d^2 != 0 in strand {key} of C^{{{r},{s}}} at {broken}")
        for i in cx.positions():
            h = complex_homology(cx, i, ring)
            if not h.is_zero:
                bad.append((key, i, h))
    return bad


def check_split_exact(dims: Dims, r: int, s: int) -> bool:
    """Over ZZ, exactness of a bounded complex of finitely generated free modules implies split exactness."""
    return not split_exact_report(dims, r, s)


def zeta_report(dims: Dims) -> dict:
    zeta = build_zeta(dims)
    boundary = apply_linear(apply_D, dims, zeta)
    image = apply_linear(apply_M, dims, zeta)
    unit = NBasis((0,) * dims.e, (0,) * dims.g, ())
    value = image.get(unit, 0)
    return {
        "terms": len(zeta),
        "boundary_terms": len(boundary),
        "M_value": value,
        "is_cycle": not boundary,
        "maps_to_unit": set(image) <= {unit} and value in (1, -1),
    }


def check_zeta(dims: Dims) -> bool:
    rep = zeta_report(dims)
    return rep["is_cycle"] and rep["maps_to_unit"]


def characteristic_scan(dims: Dims, m: int, n: int, p: int, primes=(2, 3, 5)) -> dict:
    """Dimension of H_N(m,n,p) over QQ and each GF(p); primes where it jumps."""
    dims_q = homology_N(dims, m, n, p, QQ, strands=True).dimension
    table = {"QQ": dims_q}
    jumps = []
    for q in primes:
        d = homology_N(dims, m, n, p, GF(q), strands=True).dimension
        table[f"GF({q})"] = d
        if d != dims_q:
            jumps.append(q)
    return {"dims": table, "jumps": jumps}


__all__ = [
    "HomologyResult",
    "characteristic_scan",
    "check_duality",
    "check_split_exact",
    "check_zeta",
    "complex_homology",
    "homology",
    "homology_M",
    "homology_N",
    "in_duality_band",
    "split_exact_report",
    "strand_homology",
    "zeta_report",
]
