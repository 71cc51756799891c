"""Exact sparse linear algebra over ZZ, QQ and GF(p).

Everything here works on :class:`SparseMatrix`, a column-major dictionary
of nonzero entries.  Entries are Python ints (arbitrary precision) or
``fractions.Fraction``; there is no floating point anywhere.

The main entry points are :func:`smith_normal_form`, :func:`rank_over_field`
and :func:`homology_pair`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator

from sympy import factorint, isprime

from .errors import CompositionNotZero, NotPrime


@dataclass(frozen=True)
class ScalarRing:
    """Coefficient ring: ``int`` (ZZ), ``rational`` (QQ) or ``gf`` with prime ``p``."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("int", "rational", "gf"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "gf":
            if self.p is None or not isprime(self.p):
                raise NotPrime(f"GF(p) needs a prime modulus, got {self.p!r}")
        elif self.p is not None:
            raise ValueError("only GF(p) carries a modulus")

    @property
    def is_field(self) -> bool:
        return self.kind != "int"

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "gf" else 0

    def __str__(self) -> str:
        if self.kind == "gf":
            return f"gf{self.p}"
        return self.kind


ZZ = ScalarRing("int")
QQ = ScalarRing("rational")


def GF(p: int) -> ScalarRing:
    return ScalarRing("gf", p)


def parse_ring(text: str) -> ScalarRing:
    """Parse ``int``/``z``, ``rational``/``q`` or ``gfP``/``gf(P)``."""
    t = text.strip().lower().replace(" ", "")
    if t in ("int", "z", "zz", "integer", "integers"):
        return ZZ
    if t in ("rational", "q", "qq", "rationals"):
        return QQ
    if t.startswith("gf"):
        body = t[2:].strip("()")
        if not body.isdigit():
            raise ValueError(f"bad field spec {text!r}")
        return GF(int(body))
    raise ValueError(f"bad ring spec {text!r}")


class SparseMatrix:
    """Immutable sparse matrix; zero entries are never stored."""

    __slots__ = ("nrows", "ncols", "_cols")

    def __init__(self, nrows: int, ncols: int, entries=None):
        if nrows < 0 or ncols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        self.nrows = nrows
        self.ncols = ncols
        cols: dict[int, dict[int, object]] = {}
        if entries:
            items = entries.items() if isinstance(entries, dict) else entries
            for (i, j), v in items:
                if not (0 <= i < nrows and 0 <= j < ncols):
                    raise IndexError(f"entry ({i}, {j}) outside {nrows}x{ncols}")
                if v:
                    col = cols.setdefault(j, {})
                    col[i] = col.get(i, 0) + v
                    if not col[i]:
                        del col[i]
                        if not col:
                            del cols[j]
        self._cols = cols

    @classmethod
    def _raw(cls, nrows: int, ncols: int, cols: dict) -> "SparseMatrix":
        # caller guarantees: no zero entries, no empty columns, indices in range
        m = object.__new__(cls)
        m.nrows = nrows
        m.ncols = ncols
        m._cols = cols
        return m

    @classmethod
    def from_columns(cls, nrows: int, columns: Iterable[dict]) -> "SparseMatrix":
        cols = {}
        ncols = 0
        for j, col in enumerate(columns):
            ncols = j + 1
            clean = {i: v for i, v in col.items() if v}
            for i in clean:
                if not 0 <= i < nrows:
                    raise IndexError(f"row index {i} outside 0..{nrows - 1}")
            if clean:
                cols[j] = clean
        return cls._raw(nrows, ncols, cols)

    @classmethod
    def from_dense(cls, rows: list[list]) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        return cls(nrows, ncols, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v})

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "SparseMatrix":
        return cls._raw(nrows, ncols, {})

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls._raw(n, n, {j: {j: 1} for j in range(n)})

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self._cols.values())

    def __getitem__(self, key):
        i, j = key
        return self._cols.get(j, {}).get(i, 0)

    def column(self, j: int) -> dict:
        return dict(self._cols.get(j, {}))

    def items(self) -> Iterator[tuple[tuple[int, int], object]]:
        for j in sorted(self._cols):
            col = self._cols[j]
            for i in sorted(col):
                yield (i, j), col[i]

    def rows_dict(self) -> dict[int, dict[int, object]]:
        rows: dict[int, dict[int, object]] = {}
        for j, col in self._cols.items():
            for i, v in col.items():
                rows.setdefault(i, {})[j] = v
        return rows

    def is_zero(self) -> bool:
        return not self._cols

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix._raw(self.ncols, self.nrows, self.rows_dict())

    @property
    def T(self) -> "SparseMatrix":
        return self.transpose()

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = {}
        mine = self._cols
        for j, ocol in other._cols.items():
            acc: dict[int, object] = {}
            for k, b in ocol.items():
                acol = mine.get(k)
                if acol is None:
                    continue
                for i, a in acol.items():
                    acc[i] = acc.get(i, 0) + a * b
            acc = {i: v for i, v in acc.items() if v}
            if acc:
                cols[j] = acc
        return SparseMatrix._raw(self.nrows, other.ncols, cols)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        cols = {j: dict(c) for j, c in self._cols.items()}
        for j, ocol in other._cols.items():
            col = cols.setdefault(j, {})
            for i, v in ocol.items():
                s = col.get(i, 0) + v
                if s:
                    col[i] = s
                else:
                    col.pop(i, None)
            if not col:
                del cols[j]
        return SparseMatrix._raw(self.nrows, self.ncols, cols)

    def scale(self, c) -> "SparseMatrix":
        if not c:
            return SparseMatrix.zero(self.nrows, self.ncols)
        return SparseMatrix._raw(
            self.nrows, self.ncols, {j: {i: c * v for i, v in col.items()} for j, col in self._cols.items()}
        )

    def __neg__(self) -> "SparseMatrix":
        return self.scale(-1)

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self._cols == other._cols

    def __hash__(self):
        return hash((self.shape, tuple(self.items())))

    def __repr__(self) -> str:
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"

    def to_dense(self) -> list[list]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in self._cols.items():
            for i, v in col.items():
                out[i][j] = v
        return out

    def permuted(self, row_perm, col_perm) -> "SparseMatrix":
        """Entry (i, j) moves to (row_perm[i], col_perm[j])."""
        return SparseMatrix._raw(
            self.nrows,
            self.ncols,
            {col_perm[j]: {row_perm[i]: v for i, v in col.items()} for j, col in self._cols.items()},
        )

    def block(self, row_offset: int, col_offset: int, nrows: int, ncols: int) -> "SparseMatrix":
        """Embed this matrix into a larger zero matrix at the given offsets."""
        return SparseMatrix._raw(
            nrows,
            ncols,
            {j + col_offset: {i + row_offset: v for i, v in col.items()} for j, col in self._cols.items()},
        )

    def is_integral(self) -> bool:
        for col in self._cols.values():
            for v in col.values():
                if isinstance(v, Fraction):
                    if v.denominator != 1:
                        return False
                elif not isinstance(v, int):
                    return False
        return True


def stack_blocks(row_dims: list[int], col_dims: list[int], blocks: dict) -> SparseMatrix:
    """Assemble a block matrix; ``blocks[(bi, bj)]`` is a SparseMatrix or absent."""
    roff = [0]
    for d in row_dims:
        roff.append(roff[-1] + d)
    coff = [0]
    for d in col_dims:
        coff.append(coff[-1] + d)
    cols: dict[int, dict[int, object]] = {}
    for (bi, bj), mat in blocks.items():
        if mat is None:
            continue
        if mat.shape != (row_dims[bi], col_dims[bj]):
            raise ValueError(f"block {(bi, bj)} has shape {mat.shape}, expected {(row_dims[bi], col_dims[bj])}")
        for j, col in mat._cols.items():
            dst = cols.setdefault(j + coff[bj], {})
            for i, v in col.items():
                r = i + roff[bi]
                s = dst.get(r, 0) + v
                if s:
                    dst[r] = s
                else:
                    dst.pop(r, None)
    cols = {j: c for j, c in cols.items() if c}
    return SparseMatrix._raw(roff[-1], coff[-1], cols)


# ---------------------------------------------------------------------------
# Abelian group invariants


def invariant_factors_from_orders(orders: Iterable[int]) -> tuple[int, ...]:
    """Rewrite a direct sum of cyclic groups Z/d as an invariant-factor chain.

    Orders equal to 1 are dropped; the result satisfies d_1 | d_2 | ... | d_k.
    """
    per_prime: dict[int, list[int]] = {}
    for d in orders:
        d = abs(int(d))
        if d == 0:
            raise ValueError("Z/0 is not a torsion summand")
        if d == 1:
            continue
        for p, k in factorint(d).items():
            per_prime.setdefault(p, []).append(k)
    if not per_prime:
        return ()
    length = max(len(v) for v in per_prime.values())
    factors = [1] * length
    for p, exps in per_prime.items():
        exps.sort(reverse=True)
        for idx, k in enumerate(exps):
            factors[length - 1 - idx] *= p**k
    return tuple(factors)


@dataclass(frozen=True)
class AbelianGroupInvariants:
    """Z^free_rank plus Z/d_1 + ... + Z/d_k with d_1 | ... | d_k, every d_i >= 2."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(t) for t in self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for t in self.torsion:
            if t < 2:
                raise ValueError(f"torsion coefficient {t} < 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")

    @classmethod
    def from_orders(cls, free_rank: int, orders: Iterable[int]) -> "AbelianGroupInvariants":
        return cls(free_rank, invariant_factors_from_orders(orders))

    def __add__(self, other: "AbelianGroupInvariants") -> "AbelianGroupInvariants":
        return AbelianGroupInvariants.from_orders(self.free_rank + other.free_rank, self.torsion + other.torsion)

    def times(self, k: int) -> "AbelianGroupInvariants":
        """Direct sum of ``k`` copies."""
        if k < 0:
            raise ValueError("negative multiplicity")
        return AbelianGroupInvariants.from_orders(self.free_rank * k, self.torsion * k)

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


ZERO_GROUP = AbelianGroupInvariants(0, ())


# ---------------------------------------------------------------------------
# Smith normal form


def _as_int_rows(A: SparseMatrix) -> dict[int, dict[int, int]]:
    rows = A.rows_dict()
    for r in rows.values():
        for j, v in r.items():
            if isinstance(v, Fraction):
                if v.denominator != 1:
                    raise ValueError("Smith normal form needs an integer matrix")
                r[j] = v.numerator
            elif not isinstance(v, int):
                raise ValueError(f"non-integer entry {v!r}")
    return rows


def _choose_pivot(rows, cols):
    best = None
    best_key = None
    for i, row in rows.items():
        rl = len(row) - 1
        for j, v in row.items():
            key = (abs(v), rl * (len(cols[j]) - 1))
            if best_key is None or key < best_key:
                best_key = key
                best = (i, j)
                if key == (1, 0):
                    return best
    return best


def _row_axpy(rows, cols, k, i, q):
    """row_k += q * row_i"""
    rk = rows[k]
    for l, v in rows[i].items():
        s = rk.get(l, 0) + q * v
        if s:
            if l not in rk:
                cols[l].add(k)
            rk[l] = s
        else:
            if l in rk:
                del rk[l]
                cols[l].discard(k)
    if not rk:
        del rows[k]


def _nearest_quotient(a: int, b: int) -> int:
    q, r = divmod(a, b)
    # make |a - q b| <= |b| / 2
    if 2 * abs(r) > abs(b):
        q += 1 if (r > 0) == (b > 0) else -1
    return q


def _snf_diagonal(A: SparseMatrix) -> list[int]:
    """Eliminate ``A`` to a diagonal by unimodular row/column operations.

    Returns absolute values of the diagonal entries (not yet a divisibility chain).
    """
    rows = _as_int_rows(A)
    cols: dict[int, set] = {}
    for i, row in rows.items():
        for j in row:
            cols.setdefault(j, set()).add(i)
    diag = []
    while rows:
        i, j = _choose_pivot(rows, cols)
        while True:
            piv = rows[i][j]
            for k in list(cols[j]):
                if k == i:
                    continue
                _row_axpy(rows, cols, k, i, -_nearest_quotient(rows[k][j], piv))
            others = [k for k in cols[j] if k != i]
            if others:
                i = min(others, key=lambda k: (abs(rows[k][j]), len(rows[k])))
                continue
            # column j now holds only the pivot, so column operations touch row i alone
            row = rows[i]
            leftover = None
            for l in list(row):
                if l == j:
                    continue
                r = row[l] - _nearest_quotient(row[l], piv) * piv
                if r:
                    row[l] = r
                    if leftover is None or abs(r) < abs(row[leftover]):
                        leftover = l
                else:
                    del row[l]
                    cols[l].discard(i)
            if leftover is not None:
                j = leftover
                continue
            diag.append(abs(piv))
            del rows[i]
            cols[j].discard(i)
            break
    return diag


def smith_normal_form(A: SparseMatrix) -> tuple[list[int], int]:
    """Invariant factors (including the 1s) and rank of an integer matrix."""
    diag = _snf_diagonal(A)
    ones = sum(1 for d in diag if d == 1)
    factors = [1] * ones + list(invariant_factors_from_orders(d for d in diag if d != 1))
    # when a prime-power regrouping shortens the chain, pad with units so len == rank
    factors = [1] * (len(diag) - len(factors)) + factors
    return factors, len(diag)


def elementary_divisor_orders(A: SparseMatrix) -> tuple[int, tuple[int, ...]]:
    """Rank and torsion part of the cokernel of ``A``."""
    factors, rank = smith_normal_form(A)
    return rank, tuple(d for d in factors if d > 1)


# ---------------------------------------------------------------------------
# Ranks over fields


def _rank_rational(A: SparseMatrix) -> int:
    rows: dict[int, dict[int, int]] = {}
    for i, row in A.rows_dict().items():
        den = 1
        for v in row.values():
            if isinstance(v, Fraction):
                den = den * v.denominator // gcd(den, v.denominator)
        rows[i] = {j: int(v * den) for j, v in row.items()}
    cols: dict[int, set] = {}
    for i, row in rows.items():
        for j in row:
            cols.setdefault(j, set()).add(i)
    rank = 0
    while rows:
        i = min(rows, key=lambda r: len(rows[r]))
        row_i = rows[i]
        j = min(row_i, key=lambda c: (abs(row_i[c]), len(cols[c])))
        piv = row_i[j]
        for k in list(cols[j]):
            if k == i:
                continue
            rk = rows[k]
            a = rk[j]
            g0 = gcd(a, piv)
            mk, mi = piv // g0, a // g0
            new = {}
            for l, v in rk.items():
                new[l] = mk * v
            for l, v in row_i.items():
                new[l] = new.get(l, 0) - mi * v
            new = {l: v for l, v in new.items() if v}
            content = 0
            for v in new.values():
                content = gcd(content, v)
                if content == 1:
                    break
            if content > 1:
                new = {l: v // content for l, v in new.items()}
            for l in rk:
                if l not in new:
                    cols[l].discard(k)
            for l in new:
                if l not in rk:
                    cols[l].add(k)
            if new:
                rows[k] = new
            else:
                del rows[k]
        for l in row_i:
            cols[l].discard(i)
        del rows[i]
        rank += 1
    return rank


def _rank_mod_p(A: SparseMatrix, p: int) -> int:
    rows: dict[int, dict[int, int]] = {}
    for i, row in A.rows_dict().items():
        r = {}
        for j, v in row.items():
            if isinstance(v, Fraction):
                if v.denominator % p == 0:
                    raise ZeroDivisionError(f"entry {v} is not defined over GF({p})")
                v = v.numerator * pow(v.denominator, -1, p)
            v %= p
            if v:
                r[j] = v
        if r:
            rows[i] = r
    cols: dict[int, set] = {}
    for i, row in rows.items():
        for j in row:
            cols.setdefault(j, set()).add(i)
    rank = 0
    while rows:
        i = min(rows, key=lambda r: len(rows[r]))
        row_i = rows[i]
        j = min(row_i, key=lambda c: len(cols[c]))
        inv = pow(row_i[j], -1, p)
        for k in list(cols[j]):
            if k == i:
                continue
            rk = rows[k]
            f = rk[j] * inv % p
            for l, v in row_i.items():
                s = (rk.get(l, 0) - f * v) % p
                if s:
                    if l not in rk:
                        cols[l].add(k)
                    rk[l] = s
                elif l in rk:
                    del rk[l]
                    cols[l].discard(k)
            if not rk:
                del rows[k]
        for l in row_i:
            cols[l].discard(i)
        del rows[i]
        rank += 1
    return rank


def rank_over_field(A: SparseMatrix, field: ScalarRing = QQ) -> int:
    """Rank of ``A`` after mapping its entries into QQ or GF(p)."""
    if field.kind == "rational":
        return _rank_rational(A)
    if field.kind == "gf":
        return _rank_mod_p(A, field.p)
    raise ValueError("rank_over_field needs a field (rational or gf)")


def rank(A: SparseMatrix, ring: ScalarRing = QQ) -> int:
    """Rank over ``ring``; over ZZ this is the rational rank."""
    return rank_over_field(A, QQ if ring.kind == "int" else ring)


# ---------------------------------------------------------------------------
# Homology


def composition_is_zero(d_out: SparseMatrix, d_in: SparseMatrix, ring: ScalarRing = ZZ) -> bool:
    prod = d_out @ d_in
    if ring.kind == "gf":
        return all(v % ring.p == 0 for _, v in prod.items())
    return prod.is_zero()


def homology_pair(d_in: SparseMatrix, d_out: SparseMatrix, ring: ScalarRing = ZZ) -> AbelianGroupInvariants:
    """ker(d_out) / im(d_in) for ``d_in: A -> B`` and ``d_out: B -> C``.

    Over ZZ the torsion of ker/im equals the torsion of coker(d_in), because
    ker(d_out) is saturated in the free module B; so the torsion is read off
    the Smith form of ``d_in`` and the free rank from the two ranks.
    """
    if d_in.nrows != d_out.ncols:
        raise ValueError(f"middle dimensions disagree: {d_in.nrows} vs {d_out.ncols}")
    if not composition_is_zero(d_out, d_in, ring):
        raise CompositionNotZero(f"d_out @ d_in != 0 ({d_out.shape} @ {d_in.shape})")
    middle = d_in.nrows
    if ring.kind == "int":
        r_in, torsion = elementary_divisor_orders(d_in)
        r_out = _rank_rational(d_out)
        return AbelianGroupInvariants(middle - r_in - r_out, torsion)
    r_in = rank_over_field(d_in, ring)
    r_out = rank_over_field(d_out, ring)
    return AbelianGroupInvariants(middle - r_in - r_out, ())


__all__ = [
    "AbelianGroupInvariants",
    "GF",
    "QQ",
    "ScalarRing",
    "SparseMatrix",
    "ZERO_GROUP",
    "ZZ",
    "composition_is_zero",
    "elementary_divisor_orders",
    "homology_pair",
    "invariant_factors_from_orders",
    "parse_ring",
    "rank",
    "rank_over_field",
    "smith_normal_form",
    "stack_blocks",
]
