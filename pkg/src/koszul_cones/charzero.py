"""Characteristic-zero dimension oracle for Tor of the Segre modules.

Over a field of characteristic zero Tor_{p,q}(M_ell) is a sum of Schur
modules S_lam E* (x) S_mu G.  Put s = q+ell-p.  Then lam is an
(s+1-ell) x s rectangle with a partition beta glued on the right and a
partition alpha (alpha_1 <= s) below; mu is an (s+1) x (s-ell) rectangle
with alpha' glued on the right and beta' below.  Dimensions come from the
hook-content formula.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from sympy.utilities.iterables import partitions as _sympy_partitions

from .errors import OutOfRange
from .exact_linalg import QQ, ScalarRing
from .multilinear import Dims


class Partition(tuple):
    """Weakly decreasing tuple of positive integers."""

    def __new__(cls, parts=()):
        parts = tuple(int(x) for x in parts if x)
        if any(x < 0 for x in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"not a partition: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def conjugate(self) -> "Partition":
        if not self:
            return Partition()
        return Partition(sum(1 for x in self if x > j) for j in range(self[0]))


def partitions_of(total: int, max_part: int | None = None, max_len: int | None = None):
    """Partitions of ``total`` with bounded largest part and length, largest first."""
    if total < 0 or (max_part is not None and max_part < 0) or (max_len is not None and max_len < 0):
        return []
    if total == 0:
        return [Partition()]
    if max_part == 0 or max_len == 0:
        return []
    out = []
    for mult in _sympy_partitions(total, m=max_len, k=max_part):
        parts = []
        for part in sorted(mult, reverse=True):
            parts.extend([part] * mult[part])
        out.append(Partition(parts))
    return sorted(out, reverse=True)


def schur_dimension(lam, rank: int) -> int:
    """dim S_lam of a free module of the given rank (hook-content formula)."""
    lam = Partition(lam)
    if lam.length > rank:
        return 0
    conj = lam.conjugate()
    value = Fraction(1)
    for i, row in enumerate(lam):
        for j in range(row):
            hook = (row - j) + (conj[j] - i) - 1
            value *= Fraction(rank + j - i, hook)
    assert value.denominator == 1
    return int(value)


def rr_pairs(p: int, q: int, ell: int, e: int, g: int) -> list[tuple[Partition, Partition]]:
    """(lam, mu) with S_lam E* (x) S_mu G a summand of Tor_{p,q}(M_ell), nonzero dims only."""
    s = q + ell - p
    n = s - ell
    if s < 0 or n < 0:
        return []
    rest = q + ell - s * (n + 1)
    if rest < 0:
        return []
    found = set()
    for k in range(rest + 1):
        for alpha in partitions_of(k, max_part=s):
            for beta in partitions_of(rest - k, max_len=n):
                lam = Partition(
                    [s + (beta[i] if i < len(beta) else 0) for i in range(n + 1)] + list(alpha)
                )
                ac = alpha.conjugate()
                mu = Partition([n + (ac[i] if i < len(ac) else 0) for i in range(s + 1)] + list(beta.conjugate()))
                if schur_dimension(lam, e) and schur_dimension(mu, g):
                    found.add((lam, mu))
    return sorted(found, reverse=True)


def tor_dimension_char0(p: int, q: int, ell: int, e: int, g: int) -> int:
    return sum(schur_dimension(lam, e) * schur_dimension(mu, g) for lam, mu in rr_pairs(p, q, ell, e, g))


def cauchy_identity_check(dims: Dims, p: int) -> bool:
    """dim Tor_{p,p+e}(M_-e) + dim Tor_{p',p'}(M_g) = C(eg, e+p) with p+p' = eg-e-g."""
    e, g = dims.e, dims.g
    top = e * g - e - g
    if not 0 <= p <= top:
        raise OutOfRange(f"p={p} outside 0..{top}")
    left = tor_dimension_char0(p, p + e, -e, e, g) + tor_dimension_char0(top - p, top - p, g, e, g)
    return left == comb(e * g, e + p)


def cauchy_totals_check(e: int, g: int) -> bool:
    """Sum over beta in an e x g box of dim S_beta E* . dim S_beta' G equals C(eg, |beta|)."""
    for k in range(e * g + 1):
        total = sum(
            schur_dimension(b, e) * schur_dimension(b.conjugate(), g) for b in partitions_of(k, max_part=g, max_len=e)
        )
        if total != comb(e * g, k):
            return False
    return True


def default_grid(dims: Dims, q_max: int | None = None):
    if q_max is None:
        q_max = dims.e + dims.g + 3
    for q in range(q_max + 1):
        for p in range(min(q, dims.e * dims.g) + 1):
            yield p, q


def oracle_agreement(dims: Dims, ell: int, field: ScalarRing = QQ, grid=None) -> dict:
    """Compare the oracle with computed Betti numbers; mismatches listed as (p, q, oracle, computed)."""
    from .betti import betti_number

    if grid is None:
        grid = list(default_grid(dims))
    mismatches = []
    checked = 0
    for p, q in grid:
        oracle = tor_dimension_char0(p, q, ell, dims.e, dims.g)
        computed = betti_number(dims, p, q, ell, field)
        checked += 1
        if oracle != computed:
            mismatches.append((p, q, oracle, computed))
    return {"ell": ell, "checked": checked, "mismatches": mismatches}


__all__ = [
    "Partition",
    "cauchy_identity_check",
    "cauchy_totals_check",
    "default_grid",
    "oracle_agreement",
    "partitions_of",
    "rr_pairs",
    "schur_dimension",
    "tor_dimension_char0",
]
