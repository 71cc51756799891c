"""Bases and elementary operations in Sym, D and exterior algebras.

Conventions used throughout the package:

* Variables are indexed from 0.  ``u_k``/``v_k`` (k < e) are dual bases of
  E and E*, ``y_l``/``x_l`` (l < g) dual bases of G* and G.
* A square (k, l) of the e x g board is stored as the integer ``k * g + l``.
  This row-major numbering is the total order on the generators
  ``u_k (x) y_l`` of E (x) G* and ``v_k (x) x_l`` of E* (x) G.
* An exterior monomial is a strictly increasing tuple of squares.
* A divided or symmetric monomial is a tuple of exponents.
* Interior products act from the left: removing the generator in position
  t (1-based) costs (-1)^(t+1), and a product A ^ B of dual generators
  acts as A(B(-)).  Under this rule the pairing of an exterior monomial
  with the identical monomial on the dual side is (-1)^(p(p-1)/2).
* The orientation of the top power of E* (x) G is chosen so that the top
  power of E (x) G* evaluates to 1 on it; hence a top-degree wedge of
  generators evaluates to the sign of the permutation sorting it.

The tau / L / Upsilon / Y-minus / Y-plus helpers take the 1-based index j
used in their definitions (with the boundary values 0 and g + 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterator, NamedTuple

from .errors import DegreeMismatch, OutOfRange


@dataclass(frozen=True)
class Dims:
    e: int
    g: int

    def __post_init__(self):
        if self.e < 1 or self.g < 1:
            raise ValueError(f"need e, g >= 1, got e={self.e}, g={self.g}")

    @property
    def alpha(self) -> int:
        return (self.e - 1) * (self.g - 1)

    @property
    def size(self) -> int:
        return self.e * self.g

    def square(self, row: int, col: int) -> int:
        return row * self.g + col

    def row(self, sq: int) -> int:
        return sq // self.g

    def col(self, sq: int) -> int:
        return sq % self.g

    def pair(self, sq: int) -> tuple[int, int]:
        return divmod(sq, self.g)

    def row_content(self, z) -> tuple[int, ...]:
        out = [0] * self.e
        for sq in z:
            out[sq // self.g] += 1
        return tuple(out)

    def col_content(self, z) -> tuple[int, ...]:
        out = [0] * self.g
        for sq in z:
            out[sq % self.g] += 1
        return tuple(out)


class MBasis(NamedTuple):
    """u-exponents (D E), y-exponents (D G*), exterior squares of E (x) G*."""

    u: tuple
    y: tuple
    z: tuple


class NBasis(NamedTuple):
    """v-exponents (Sym E*), x-exponents (Sym G), exterior squares of E* (x) G."""

    v: tuple
    x: tuple
    w: tuple


# ---------------------------------------------------------------------------
# monomials


@lru_cache(maxsize=None)
def compositions(total: int, length: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of the given degree, first exponent largest first."""
    if total < 0 or length < 0:
        return ()
    if length == 0:
        return ((),) if total == 0 else ()
    if length == 1:
        return ((total,),)
    out = []
    for first in range(total, -1, -1):
        for rest in compositions(total - first, length - 1):
            out.append((first,) + rest)
    return tuple(out)


def contract_divided(index: int, mono: tuple) -> tuple | None:
    """v_index acting on a divided monomial: lower that exponent, coefficient 1."""
    if mono[index] == 0:
        return None
    out = list(mono)
    out[index] -= 1
    return tuple(out)


def sym_multiply(index: int, mono: tuple) -> tuple:
    out = list(mono)
    out[index] += 1
    return tuple(out)


@lru_cache(maxsize=None)
def distinct_words(content: tuple) -> tuple[tuple[int, ...], ...]:
    """All distinct words with letter i appearing content[i] times."""
    n = sum(content)
    if n == 0:
        return ((),)
    out = []
    rem = list(content)

    def rec(prefix):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for i, c in enumerate(rem):
            if c:
                rem[i] -= 1
                prefix.append(i)
                rec(prefix)
                prefix.pop()
                rem[i] += 1

    rec([])
    return tuple(out)


# ---------------------------------------------------------------------------
# exterior algebra on squares


def perm_sign(seq) -> int:
    """Sign of the permutation sorting ``seq``; 0 if an entry repeats."""
    n = len(seq)
    rank = {v: i for i, v in enumerate(sorted(seq))}
    if len(rank) != n:
        return 0
    target = [rank[v] for v in seq]
    seen = [False] * n
    sign = 1
    for i in range(n):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = target[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def sort_signed(seq) -> tuple[int, tuple]:
    """(sign, sorted tuple) for a wedge of generators listed in ``seq``."""
    s = perm_sign(seq)
    if s == 0:
        return 0, ()
    return s, tuple(sorted(seq))


def wedge(a: tuple, b: tuple) -> tuple[int, tuple] | None:
    """a ^ b for sorted tuples; None when they share a generator."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    out = []
    inversions = 0
    i = j = 0
    la = len(a)
    while i < la and j < len(b):
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        elif a[i] > b[j]:
            out.append(b[j])
            inversions += la - i
            j += 1
        else:
            return None
    out.extend(a[i:])
    out.extend(b[j:])
    return (-1 if inversions & 1 else 1), tuple(out)


def interior(sq: int, z: tuple) -> tuple[int, tuple] | None:
    """Contract the dual generator ``sq`` into z from the left."""
    for t, s in enumerate(z):
        if s == sq:
            return (1 if t % 2 == 0 else -1), z[:t] + z[t + 1 :]
        if s > sq:
            return None
    return None


def epsilon(p: int) -> int:
    """(-1)^(p(p-1)/2): pairing of an exterior monomial with its own dual copy."""
    return -1 if (p * (p - 1) // 2) & 1 else 1


def evaluate_top(dims: Dims, z: tuple) -> tuple[int, tuple]:
    """Contract the wedge ``z`` (dual generators) into the orientation.

    Returns (sign, complementary squares).  The full set in declared order
    gives (1, ()); the empty set gives (1, all squares).
    """
    N = dims.size
    cur = tuple(range(N))
    sign = epsilon(N)
    for sq in reversed(z):
        res = interior(sq, cur)
        if res is None:
            return 0, ()
        s, cur = res
        sign *= s
    return sign, cur


def orientation(dims: Dims) -> tuple:
    return tuple(range(dims.size))


def top_value(dims: Dims, seq) -> int:
    """Evaluate a top-degree wedge (given as a sequence of squares) on the orientation."""
    if len(seq) != dims.size:
        raise DegreeMismatch(f"top degree is {dims.size}, got {len(seq)} factors")
    return perm_sign(seq)


def exterior_pairing(z: tuple, w: tuple) -> int:
    if z != w:
        return 0
    return epsilon(len(z))


# ---------------------------------------------------------------------------
# linear combinations (dict basis -> coefficient)


def add_term(acc: dict, key, coeff) -> None:
    if not coeff:
        return
    s = acc.get(key, 0) + coeff
    if s:
        acc[key] = s
    else:
        acc.pop(key, None)


def wedge_elements(a: dict, b: dict) -> dict:
    out: dict = {}
    for za, ca in a.items():
        for zb, cb in b.items():
            res = wedge(za, zb)
            if res is not None:
                add_term(out, res[1], res[0] * ca * cb)
    return out


def wedge_all(*elements: dict) -> dict:
    acc = {(): 1}
    for el in elements:
        acc = wedge_elements(acc, el)
        if not acc:
            break
    return acc


# ---------------------------------------------------------------------------
# the bowtie maps


def bowtie_DE(dims: Dims, U: tuple, cols: tuple) -> dict:
    """U (divided power of E) bowtie y_{cols[0]} ^ ... ^ y_{cols[-1]}.

    ``cols`` lists the G* generators in the order they are wedged.
    """
    if sum(U) != len(cols):
        raise DegreeMismatch(f"|U|={sum(U)} but Y has degree {len(cols)}")
    g = dims.g
    out: dict = {}
    for word in distinct_words(tuple(U)):
        s, z = sort_signed([k * g + c for k, c in zip(word, cols)])
        if s:
            add_term(out, z, s)
    return out


def bowtie_ED(dims: Dims, rows: tuple, Y: tuple) -> dict:
    """u_{rows[0]} ^ ... ^ u_{rows[-1]} bowtie Y (divided power of G*)."""
    if sum(Y) != len(rows):
        raise DegreeMismatch(f"|Y|={sum(Y)} but u-wedge has degree {len(rows)}")
    g = dims.g
    out: dict = {}
    for word in distinct_words(tuple(Y)):
        s, z = sort_signed([k * g + c for k, c in zip(rows, word)])
        if s:
            add_term(out, z, s)
    return out


def omega_E(dims: Dims) -> tuple:
    return tuple(range(dims.e))


def omega_Gstar(dims: Dims) -> tuple:
    return tuple(range(dims.g))


def y_minus(dims: Dims, j: int) -> tuple:
    """Y^-_j = y_1 ^ ... ^ y_j as a tuple of 0-based columns."""
    if not 0 <= j <= dims.g:
        raise OutOfRange(f"Y^- index {j} outside 0..{dims.g}")
    return tuple(range(j))


def y_plus(dims: Dims, j: int) -> tuple:
    """Y^+_j = y_j ^ ... ^ y_g as a tuple of 0-based columns."""
    if not 1 <= j <= dims.g + 1:
        raise OutOfRange(f"Y^+ index {j} outside 1..{dims.g + 1}")
    return tuple(range(j - 1, dims.g))


# ---------------------------------------------------------------------------
# tau_j, L_j, Upsilon_j (j is 1-based)


def tau(j: int, Yp: tuple, Y: tuple) -> tuple | None:
    """tau_j(Y' (x) Y); None where the vanishing conditions fail."""
    g = len(Y)
    if not 1 <= j <= g:
        raise OutOfRange(f"tau index {j} outside 1..{g}")
    k = j - 1
    if any(Y[:k]) or any(Yp[k + 1 :]):
        return None
    return tuple(Yp[:k]) + (Yp[k] + Y[k] + 1,) + tuple(Y[k + 1 :])


def tau_preimage(j: int, result: tuple, Y: tuple) -> tuple | None:
    """The unique Y' with tau_j(Y' (x) Y) = result, or None."""
    k = j - 1
    if any(Y[:k]) or tuple(result[k + 1 :]) != tuple(Y[k + 1 :]):
        return None
    a = result[k] - Y[k] - 1
    if a < 0:
        return None
    return tuple(result[:k]) + (a,) + (0,) * (len(Y) - k - 1)


def proj_L(j: int, Y: tuple) -> tuple | None:
    """L_j keeps Y when b_1 = ... = b_j = 0; L_0 is the identity."""
    if not 0 <= j <= len(Y):
        raise OutOfRange(f"L index {j} outside 0..{len(Y)}")
    return None if any(Y[:j]) else Y


def proj_Upsilon(j: int, Y: tuple) -> tuple | None:
    """Upsilon_j keeps Y when b_j = ... = b_g = 0; Upsilon_{g+1} is the identity."""
    if not 1 <= j <= len(Y) + 1:
        raise OutOfRange(f"Upsilon index {j} outside 1..{len(Y) + 1}")
    return None if any(Y[j - 1 :]) else Y


# ---------------------------------------------------------------------------
# bases


def _exterior_subsets(N: int, p: int):
    return combinations(range(N), p)


@lru_cache(maxsize=None)
def enumerate_basis(dims: Dims, kind: str, m: int, n: int, p: int) -> tuple:
    """Ordered basis of M(m,n,p) (kind 'M'), N(m,n,p) (kind 'N') or B(p) (kind 'B')."""
    if kind not in ("M", "N", "B"):
        raise ValueError(f"unknown module kind {kind!r}")
    N = dims.size
    if kind == "B":
        if not 0 <= p <= N:
            return ()
        return tuple(_exterior_subsets(N, p))
    if m < 0 or n < 0 or p < 0 or p > N:
        return ()
    A = compositions(m, dims.e)
    C = compositions(n, dims.g)
    W = tuple(_exterior_subsets(N, p))
    cls = MBasis if kind == "M" else NBasis
    return tuple(cls(a, c, w) for a in A for c in C for w in W)


def basis_size(dims: Dims, kind: str, m: int, n: int, p: int) -> int:
    if kind not in ("M", "N", "B"):
        raise ValueError(f"unknown module kind {kind!r}")
    N = dims.size
    if kind == "B":
        return comb(N, p) if 0 <= p <= N else 0
    if m < 0 or n < 0 or p < 0 or p > N:
        return 0
    return comb(m + dims.e - 1, dims.e - 1) * comb(n + dims.g - 1, dims.g - 1) * comb(N, p)


def pairing(mt: MBasis, nt: NBasis) -> int:
    """The perfect pairing of M(m,n,p) with N(m,n,p) on basis elements."""
    if sum(mt.u) != sum(nt.v) or sum(mt.y) != sum(nt.x) or len(mt.z) != len(nt.w):
        raise DegreeMismatch("pairing needs elements of the same tri-degree")
    if mt.u != nt.v or mt.y != nt.x:
        return 0
    return exterior_pairing(mt.z, nt.w)


def dual_of_M(mt: MBasis) -> tuple[int, NBasis]:
    """(sign, S) so that sign * S is the dual basis vector of mt under the pairing."""
    return epsilon(len(mt.z)), NBasis(mt.u, mt.y, mt.z)


def dual_of_N(nt: NBasis) -> tuple[int, MBasis]:
    return epsilon(len(nt.w)), MBasis(nt.v, nt.x, nt.w)


# ---------------------------------------------------------------------------
# restricted enumeration by content


def bounded_subsets(dims: Dims, p: int, row_cap, col_cap, row_exact: bool = False, col_exact: bool = False) -> Iterator[tuple]:
    """Sorted p-subsets of squares with row counts <= row_cap and col counts <= col_cap.

    With ``row_exact`` (resp. ``col_exact``) the counts must equal the caps.
    """
    e, g = dims.e, dims.g
    N = e * g
    if p < 0 or p > N:
        return
    if any(c < 0 for c in row_cap) or any(c < 0 for c in col_cap):
        return
    if row_exact and sum(row_cap) != p:
        return
    if col_exact and sum(col_cap) != p:
        return
    rows = list(row_cap)
    cols = list(col_cap)
    chosen: list[int] = []

    def rec(start, left):
        if left == 0:
            if row_exact and any(rows):
                return
            if col_exact and any(cols):
                return
            yield tuple(chosen)
            return
        for sq in range(start, N - left + 1):
            r, c = divmod(sq, g)
            if rows[r] and cols[c]:
                if row_exact:
                    # rows before r can no longer be filled
                    if any(rows[:r]):
                        break
                rows[r] -= 1
                cols[c] -= 1
                chosen.append(sq)
                yield from rec(sq + 1, left - 1)
                chosen.pop()
                rows[r] += 1
                cols[c] += 1

    yield from rec(0, p)


__all__ = [
    "Dims",
    "MBasis",
    "NBasis",
    "add_term",
    "basis_size",
    "bounded_subsets",
    "bowtie_DE",
    "bowtie_ED",
    "compositions",
    "contract_divided",
    "distinct_words",
    "dual_of_M",
    "dual_of_N",
    "enumerate_basis",
    "epsilon",
    "evaluate_top",
    "exterior_pairing",
    "interior",
    "omega_E",
    "omega_Gstar",
    "orientation",
    "pairing",
    "perm_sign",
    "proj_L",
    "proj_Upsilon",
    "sort_signed",
    "sym_multiply",
    "tau",
    "tau_preimage",
    "top_value",
    "wedge",
    "wedge_all",
    "wedge_elements",
    "y_minus",
    "y_plus",
]
