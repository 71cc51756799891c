"""The maps K, D, M_m, N_m, gamma, Gamma, nu, x_g, the complexes built from
them, the comparison maps psi and the cycle zeta.

Every map is first written as a function on a single basis element that
returns a dict ``{target basis element: coefficient}``.  Matrices are then
assembled column by column against whatever bases the caller supplies;
this is what lets the strand code reuse the same maps on small bases.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Callable, NamedTuple

from .errors import KoszulConesError, OutOfRange
from .exact_linalg import SparseMatrix, stack_blocks
from .multilinear import (
    Dims,
    MBasis,
    NBasis,
    add_term,
    bowtie_DE,
    bowtie_ED,
    contract_divided,
    distinct_words,
    enumerate_basis,
    epsilon,
    evaluate_top,
    interior,
    omega_E,
    sym_multiply,
    tau,
    tau_preimage,
    wedge,
    wedge_all,
    y_minus,
    y_plus,
)


class BasisMismatch(KoszulConesError):
    """A map produced a vector outside the supplied target basis."""


# ---------------------------------------------------------------------------
# element-level maps


def apply_K(dims: Dims, S: NBasis) -> dict:
    g = dims.g
    out: dict = {}
    for t, sq in enumerate(S.w):
        k, l = divmod(sq, g)
        sign = 1 if t % 2 == 0 else -1
        add_term(out, NBasis(sym_multiply(k, S.v), sym_multiply(l, S.x), S.w[:t] + S.w[t + 1 :]), sign)
    return out


def apply_D(dims: Dims, T: MBasis) -> dict:
    g = dims.g
    out: dict = {}
    for k, a in enumerate(T.u):
        if not a:
            continue
        U2 = contract_divided(k, T.u)
        for l, b in enumerate(T.y):
            if not b:
                continue
            res = wedge((k * g + l,), T.z)
            if res is None:
                continue
            add_term(out, MBasis(U2, contract_divided(l, T.y), res[1]), res[0])
    return out


def _arrangement_sign(seq: list) -> int:
    """Sign of ``seq``, a permutation of range(len(seq))."""
    n = len(seq)
    seen = bytearray(n)
    sign = 1
    for i in range(n):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = 1
            j = seq[j]
            length += 1
        if not length & 1:
            sign = -sign
    return sign


@lru_cache(maxsize=None)
def _column_assignments(e: int, g: int, k: int, tail: tuple, k_min: int) -> tuple:
    """Functions rows -> columns with count(col i) == tail[i-k-1] for i > k and count(k) >= k_min."""
    out = []
    for c in product(range(g), repeat=e):
        counts = [0] * g
        for col in c:
            counts[col] += 1
        if tuple(counts[k + 1 :]) == tail and counts[k] >= k_min:
            out.append((c, tuple(counts)))
    return tuple(out)


def _m_type(dims: Dims, T: MBasis, tail_cols: tuple, scalar: int, q: int) -> dict:
    """Shared expansion behind M_m and N_m.

    Sums, over every T' = U' (x) Y' (x) Z', the value of
    [(omega_E bowtie tau_{m+1}(Y' (x) Y)) ^ Z' ^ Z ^ (U bowtie Y^-_m) ^ (U' bowtie tail)](omega)
    and places scalar * value * epsilon(q) on the basis vector N(U', Y', Z').
    """
    e, g = dims.e, dims.g
    U, Y, Z = T
    m = sum(U)
    if any(Y[:m]):
        return {}
    N = e * g
    zmask = 0
    for sq in Z:
        zmask |= 1 << sq
    out: dict = {}
    coeff = scalar * epsilon(q)
    assignments = _column_assignments(e, g, m, tuple(Y[m + 1 :]), Y[m] + 1)
    tail_len = len(tail_cols)
    rho_words = tuple(product(range(e), repeat=tail_len))
    Zl = list(Z)
    for w in distinct_words(tuple(U)):
        S1 = [w[i] * g + i for i in range(m)]
        mask1 = zmask
        ok = True
        for sq in S1:
            bit = 1 << sq
            if mask1 & bit:
                ok = False
                break
            mask1 |= bit
        if not ok:
            continue
        for c, counts in assignments:
            S0 = [r * g + c[r] for r in range(e)]
            mask0 = mask1
            for sq in S0:
                bit = 1 << sq
                if mask0 & bit:
                    ok = False
                    break
                mask0 |= bit
            if not ok:
                ok = True
                continue
            Yp = tau_preimage(m + 1, counts, Y)
            if Yp is None:
                continue
            for rho in rho_words:
                S2 = [rho[i] * g + tail_cols[i] for i in range(tail_len)]
                mask2 = mask0
                for sq in S2:
                    bit = 1 << sq
                    if mask2 & bit:
                        ok = False
                        break
                    mask2 |= bit
                if not ok:
                    ok = True
                    continue
                Zp = [sq for sq in range(N) if not (mask2 >> sq) & 1]
                s = _arrangement_sign(S0 + Zp + Zl + S1 + S2)
                Up = [0] * e
                for r in rho:
                    Up[r] += 1
                add_term(out, NBasis(tuple(Up), Yp, tuple(Zp)), s * coeff)
    return out


def apply_M(dims: Dims, T: MBasis) -> dict:
    """M_m(T) for T in M(m,n,p); the target is N(g-1-m, e-1-n, alpha-p)."""
    m, n, p = sum(T.u), sum(T.y), len(T.z)
    q = dims.alpha - p
    if not 0 <= m <= dims.g - 1 or n > dims.e - 1 or q < 0:
        return {}
    return _m_type(dims, T, tuple(range(m + 1, dims.g)), 1, q)


def apply_N(dims: Dims, T: MBasis) -> dict:
    """N_m(T) for T in M(m,n,p); the target is N(g-2-m, e-1-n, alpha+1-p)."""
    m, n, p = sum(T.u), sum(T.y), len(T.z)
    q = dims.alpha + 1 - p
    g = dims.g
    if not 0 <= m <= g - 2 or n > dims.e - 1 or q < 0:
        return {}
    # x_g contracts the last factor of y_{m+2} ^ ... ^ y_g (position g-m-1)
    sign = (-1) ** (m + p) * (-1) ** (g - m)
    return _m_type(dims, T, tuple(range(m + 1, g - 1)), sign, q)


def apply_gamma(dims: Dims, T: MBasis) -> dict:
    """gamma on M(0,e,p) or M(g,0,p), landing in B(e+p) or B(g+p)."""
    m, n = sum(T.u), sum(T.y)
    if m == 0 and n == dims.e:
        factor = bowtie_ED(dims, omega_E(dims), T.y)
    elif n == 0 and m == dims.g:
        factor = bowtie_DE(dims, T.u, tuple(range(dims.g)))
    else:
        return {}
    return wedge_all(factor, {T.z: 1})


def apply_Gamma(dims: Dims, Z: tuple, variant: str) -> dict:
    """Gamma: B(p) -> N(0,e,eg-e-p) (variant '0e') or N(g,0,eg-g-p) (variant 'g0')."""
    e, g = dims.e, dims.g
    N = e * g
    p = len(Z)
    zmask = 0
    for sq in Z:
        zmask |= 1 << sq
    out: dict = {}
    Zl = list(Z)
    if variant == "0e":
        q = N - e - p
        if q < 0:
            return {}
        for c in product(range(g), repeat=e):
            S = [r * g + c[r] for r in range(e)]
            mask = zmask
            ok = True
            for sq in S:
                if mask >> sq & 1:
                    ok = False
                    break
                mask |= 1 << sq
            if not ok:
                continue
            ZT = [sq for sq in range(N) if not mask >> sq & 1]
            Y = [0] * g
            for col in c:
                Y[col] += 1
            s = _arrangement_sign(S + ZT + Zl)
            add_term(out, NBasis((0,) * e, tuple(Y), tuple(ZT)), s * epsilon(q))
    elif variant == "g0":
        q = N - g - p
        if q < 0:
            return {}
        for rho in product(range(e), repeat=g):
            S = [rho[l] * g + l for l in range(g)]
            mask = zmask
            ok = True
            for sq in S:
                if mask >> sq & 1:
                    ok = False
                    break
                mask |= 1 << sq
            if not ok:
                continue
            ZT = [sq for sq in range(N) if not mask >> sq & 1]
            U = [0] * e
            for r in rho:
                U[r] += 1
            s = _arrangement_sign(S + ZT + Zl)
            add_term(out, NBasis(tuple(U), (0,) * g, tuple(ZT)), s * epsilon(q))
    else:
        raise ValueError(f"unknown Gamma variant {variant!r}")
    return out


def apply_nu(dims: Dims, T: MBasis) -> dict:
    """nu(U (x) 1 (x) Z) = Z ^ (U bowtie Y^-_{g-1}) on M(g-1,0,*)."""
    if sum(T.u) != dims.g - 1 or sum(T.y) != 0:
        return {}
    return wedge_all({T.z: 1}, bowtie_DE(dims, T.u, y_minus(dims, dims.g - 1)))


def apply_xg_M(dims: Dims, T: MBasis) -> dict:
    Y2 = contract_divided(dims.g - 1, T.y)
    return {} if Y2 is None else {MBasis(T.u, Y2, T.z): 1}


def apply_xg_N(dims: Dims, S: NBasis) -> dict:
    return {NBasis(S.v, sym_multiply(dims.g - 1, S.x), S.w): 1}


# ---------------------------------------------------------------------------
# a direct, formula-by-formula evaluator kept as an independent cross-check


def evaluate_M_pair(dims: Dims, T: MBasis, Tp: MBasis, which: str = "M") -> int:
    """[M_m(T)](T') (or [N_m(T)](T')) by expanding every factor and wedging."""
    g = dims.g
    m = sum(T.u)
    if not 0 <= m <= g - 1:
        return 0
    R = tau(m + 1, Tp.y, T.y)
    if R is None or sum(R) != dims.e:
        return 0
    A = bowtie_ED(dims, omega_E(dims), R)
    B = bowtie_DE(dims, T.u, y_minus(dims, m))
    scalar = 1
    if which == "M":
        C = bowtie_DE(dims, Tp.u, y_plus(dims, m + 2))
    else:
        if m > g - 2:
            return 0
        res = interior(g - 1, y_plus(dims, m + 2))
        if res is None:
            return 0
        scalar = res[0] * (-1) ** (m + len(T.z))
        C = bowtie_DE(dims, Tp.u, res[1])
    total = wedge_all(A, {Tp.z: 1}, {T.z: 1}, B, C)
    if not total:
        return 0
    ((zz, c),) = total.items()
    if len(zz) != dims.size:
        raise ValueError("factors do not reach top degree")
    return scalar * c


# ---------------------------------------------------------------------------
# the cycle zeta


def build_zeta(dims: Dims) -> dict:
    """zeta as a dict MBasis -> coefficient in M(g-1, e-1, alpha)."""
    e, g = dims.e, dims.g
    out: dict = {}

    def tuples(length, lo):
        if length == 0:
            yield ()
            return
        for first in range(lo, g + 1):
            for rest in tuples(length - 1, first):
                yield (first,) + rest

    for inner in tuples(e - 1, 1):
        full = (1,) + inner + (g,)
        U = tuple(full[p] - full[p - 1] for p in range(1, e + 1))
        Y = tuple(inner.count(s) for s in range(1, g + 1))
        squares = tuple((t - 1) * g + (w - 1) for t in range(1, e + 1) for w in range(full[t - 1], full[t] + 1))
        sign, comp = evaluate_top(dims, squares)
        if sign:
            add_term(out, MBasis(U, Y, comp), (-1) ** sum(inner) * sign)
    return out


def apply_linear(fn: Callable, dims: Dims, element: dict) -> dict:
    out: dict = {}
    for b, c in element.items():
        for b2, c2 in fn(dims, b).items():
            add_term(out, b2, c * c2)
    return out


# ---------------------------------------------------------------------------
# matrices


def matrix_of(fn: Callable, src_basis, tgt_basis, tgt_index: dict | None = None) -> SparseMatrix:
    """Matrix of an element-level map against ordered bases."""
    if tgt_index is None:
        tgt_index = {b: i for i, b in enumerate(tgt_basis)}
    columns = []
    for b in src_basis:
        col = {}
        for tb, c in fn(b).items():
            i = tgt_index.get(tb)
            if i is None:
                raise BasisMismatch(f"image {tb} of {b} is outside the target basis")
            col[i] = col.get(i, 0) + c
        columns.append(col)
    return SparseMatrix.from_columns(len(tgt_basis), columns)


def matrix_K(dims: Dims, m: int, n: int, p: int) -> SparseMatrix:
    """K: N(m,n,p) -> N(m+1,n+1,p-1)."""
    return matrix_of(
        lambda b: apply_K(dims, b), enumerate_basis(dims, "N", m, n, p), enumerate_basis(dims, "N", m + 1, n + 1, p - 1)
    )


def matrix_D(dims: Dims, m: int, n: int, p: int) -> SparseMatrix:
    """D: M(m,n,p) -> M(m-1,n-1,p+1)."""
    return matrix_of(
        lambda b: apply_D(dims, b), enumerate_basis(dims, "M", m, n, p), enumerate_basis(dims, "M", m - 1, n - 1, p + 1)
    )


def matrix_M(dims: Dims, m: int, n: int, p: int) -> SparseMatrix:
    """M_m: M(m,n,p) -> N(g-1-m, e-1-n, alpha-p)."""
    return matrix_of(
        lambda b: apply_M(dims, b),
        enumerate_basis(dims, "M", m, n, p),
        enumerate_basis(dims, "N", dims.g - 1 - m, dims.e - 1 - n, dims.alpha - p),
    )


def matrix_N_map(dims: Dims, m: int, n: int, p: int) -> SparseMatrix:
    """N_m: M(m,n,p) -> N(g-2-m, e-1-n, alpha+1-p)."""
    return matrix_of(
        lambda b: apply_N(dims, b),
        enumerate_basis(dims, "M", m, n, p),
        enumerate_basis(dims, "N", dims.g - 2 - m, dims.e - 1 - n, dims.alpha + 1 - p),
    )


def matrix_gamma(dims: Dims, variant: str, p: int) -> SparseMatrix:
    """gamma: M(0,e,p) -> B(e+p) (variant '0e') or M(g,0,p) -> B(g+p) (variant 'g0')."""
    if variant == "0e":
        src, k = enumerate_basis(dims, "M", 0, dims.e, p), dims.e
    elif variant == "g0":
        src, k = enumerate_basis(dims, "M", dims.g, 0, p), dims.g
    else:
        raise ValueError(f"unknown gamma variant {variant!r}")
    return matrix_of(lambda b: apply_gamma(dims, b), src, enumerate_basis(dims, "B", 0, 0, k + p))


def matrix_Gamma(dims: Dims, variant: str, p: int) -> SparseMatrix:
    """Gamma: B(p) -> N(0,e,eg-e-p) ('0e') or B(p) -> N(g,0,eg-g-p) ('g0')."""
    N = dims.size
    if variant == "0e":
        tgt = enumerate_basis(dims, "N", 0, dims.e, N - dims.e - p)
    elif variant == "g0":
        tgt = enumerate_basis(dims, "N", dims.g, 0, N - dims.g - p)
    else:
        raise ValueError(f"unknown Gamma variant {variant!r}")
    return matrix_of(lambda z: apply_Gamma(dims, z, variant), enumerate_basis(dims, "B", 0, 0, p), tgt)


# ---------------------------------------------------------------------------
# complexes


class Summand(NamedTuple):
    kind: str  # "M", "N" or "B"
    m: int
    n: int
    p: int


def summand_is_zero(dims: Dims, s: Summand) -> bool:
    if s.kind == "B":
        return not 0 <= s.p <= dims.size
    return s.m < 0 or s.n < 0 or s.p < 0 or s.p > dims.size


@dataclass
class ComplexSpec:
    """Positions, summands and element-level differential blocks of a complex.

    ``blocks[i][(a, b)]`` maps summand a of position i to summand b of
    position i - 1.
    """

    dims: Dims
    label: str
    terms: dict[int, tuple[Summand, ...]]
    blocks: dict[int, dict[tuple[int, int], Callable]]
    params: dict = field(default_factory=dict)

    def positions(self) -> list[int]:
        return sorted(self.terms)


@dataclass
class ChainComplex:
    spec: ComplexSpec
    bases: dict[int, list[tuple]]
    diffs: dict[int, SparseMatrix]

    def dim(self, i: int) -> int:
        return sum(len(b) for b in self.bases.get(i, ()))

    def positions(self) -> list[int]:
        return sorted(self.bases)

    def differential(self, i: int) -> SparseMatrix:
        """d_i: C_i -> C_{i-1} (a zero matrix where nothing is stored)."""
        if i in self.diffs:
            return self.diffs[i]
        return SparseMatrix.zero(self.dim(i - 1), self.dim(i))


def full_basis(dims: Dims) -> Callable[[Summand], tuple]:
    def provider(s: Summand):
        return enumerate_basis(dims, s.kind, s.m, s.n, s.p)

    return provider


def realize(spec: ComplexSpec, basis_of: Callable[[Summand], tuple] | None = None) -> ChainComplex:
    """Build matrices of a complex against the bases returned by ``basis_of``."""
    if basis_of is None:
        basis_of = full_basis(spec.dims)
    bases = {i: [basis_of(s) if not summand_is_zero(spec.dims, s) else () for s in spec.terms[i]] for i in spec.terms}
    diffs = {}
    index_cache: dict = {}
    for i, blocks in spec.blocks.items():
        if i not in bases or i - 1 not in bases:
            continue
        src, tgt = bases[i], bases[i - 1]
        mats = {}
        for (a, b), fn in blocks.items():
            key = (i - 1, b)
            if key not in index_cache:
                index_cache[key] = {x: j for j, x in enumerate(tgt[b])}
            mats[(b, a)] = matrix_of(fn, src[a], tgt[b], index_cache[key])
        diffs[i] = stack_blocks([len(x) for x in tgt], [len(x) for x in src], mats)
    return ChainComplex(spec, bases, diffs)


def _fn(f, dims, *extra):
    if extra:
        return lambda b: f(dims, b, *extra)
    return lambda b: f(dims, b)


def _negated(fn):
    def inner(b):
        return {k: -v for k, v in fn(b).items()}

    return inner


def _half_negated(fn):
    def inner(b):
        out = fn(b)
        if sum(b.z) % 2:
            return {k: -v for k, v in out.items()}
        return out

    return inner


def N_complex(dims: Dims, P: int, Q: int) -> ComplexSpec:
    """N(P,Q): N(P-k, Q-k, k) in position k, differential K."""
    terms = {}
    blocks = {}
    for k in range(0, dims.size + 1):
        s = Summand("N", P - k, Q - k, k)
        if summand_is_zero(dims, s):
            continue
        terms[k] = (s,)
    for k in terms:
        if k - 1 in terms:
            blocks[k] = {(0, 0): _fn(apply_K, dims)}
    return ComplexSpec(dims, f"N({P},{Q})", terms, blocks, {"kind": "N", "P": P, "Q": Q})


def M_complex(dims: Dims, P: int, Q: int) -> ComplexSpec:
    """M(P,Q): M(P-k, Q-k, k) in position P+Q+1-k, differential D."""
    terms = {}
    blocks = {}
    for k in range(0, dims.size + 1):
        s = Summand("M", P - k, Q - k, k)
        if summand_is_zero(dims, s):
            continue
        terms[P + Q + 1 - k] = (s,)
    for i in terms:
        if i - 1 in terms:
            blocks[i] = {(0, 0): _fn(apply_D, dims)}
    return ComplexSpec(dims, f"M({P},{Q})", terms, blocks, {"kind": "M", "P": P, "Q": Q})


def C_position_range(dims: Dims) -> range:
    return range(dims.alpha + 1 - dims.size, dims.size + 1)


def C_terms(dims: Dims, r: int, s: int) -> dict[int, tuple[Summand, ...]]:
    """Summands of each position of C^{r,s} (zero summands dropped)."""
    e, g, a = dims.e, dims.g, dims.alpha
    if not 0 <= r <= e + g:
        raise OutOfRange(f"r={r} outside 0..{e + g}")
    b_pos = s + 1 if r == 0 else (s - g + 1 if r == e + g else None)
    terms = {}
    for i in C_position_range(dims):
        if i == b_pos:
            p = e * g - e - s if r == 0 else e * g - s
            sm = Summand("B", 0, 0, p)
            if not summand_is_zero(dims, sm):
                terms[i] = (sm,)
            continue
        parts = []
        for sm in (Summand("M", g + i - s - 2, r + i - s - 2, a - i + 1), Summand("N", s - i, e + s - r - i, i)):
            if not summand_is_zero(dims, sm):
                parts.append(sm)
        if parts:
            terms[i] = tuple(parts)
    return terms


def C_complex(dims: Dims, r: int, s: int, negate_M: bool = False) -> ComplexSpec:
    """The complex C^{r,s}.

    ``negate_M`` flips the sign of M_m(T) for the basis elements T whose
    exterior squares have odd index sum.  This is a negative control: it
    keeps every matrix shape but breaks d^2 = 0.
    """
    terms = C_terms(dims, r, s)
    blocks: dict = {}
    for i, src in terms.items():
        tgt = terms.get(i - 1)
        if not tgt:
            continue
        bl = {}
        for a, sa in enumerate(src):
            for b, sb in enumerate(tgt):
                fn = None
                if sa.kind == "M" and sb.kind == "M":
                    fn = _fn(apply_D, dims)
                elif sa.kind == "N" and sb.kind == "N":
                    fn = _fn(apply_K, dims)
                elif sa.kind == "M" and sb.kind == "N":
                    fn = _fn(apply_M, dims)
                    if negate_M:
                        fn = _half_negated(fn)
                elif sa.kind == "M" and sb.kind == "B":
                    fn = _fn(apply_gamma, dims)
                elif sa.kind == "B" and sb.kind == "N":
                    fn = _fn(apply_Gamma, dims, "0e" if r == 0 else "g0")
                if fn is not None:
                    bl[(a, b)] = fn
        if bl:
            blocks[i] = bl
    return ComplexSpec(dims, f"C^{{{r},{s}}}", terms, blocks, {"kind": "C", "r": r, "s": s, "negate_M": negate_M})


def verify_complex(cx: ChainComplex) -> list[int]:
    """Positions i where d_{i-1} d_i is nonzero."""
    bad = []
    for i in cx.positions():
        if i in cx.diffs and i - 1 in cx.diffs:
            if not (cx.diffs[i - 1] @ cx.diffs[i]).is_zero():
                bad.append(i)
    return bad


# ---------------------------------------------------------------------------
# chain maps


@dataclass
class ChainMapSpec:
    source: ComplexSpec
    target: ComplexSpec
    blocks: dict[int, dict[tuple[int, int], Callable]]
    signs: dict = field(default_factory=dict)


@dataclass
class ChainMap:
    spec: ChainMapSpec
    source: ChainComplex
    target: ChainComplex
    maps: dict[int, SparseMatrix]

    def at(self, i: int) -> SparseMatrix:
        if i in self.maps:
            return self.maps[i]
        return SparseMatrix.zero(self.target.dim(i), self.source.dim(i))


def realize_map(spec: ChainMapSpec, source: ChainComplex, target: ChainComplex) -> ChainMap:
    maps = {}
    for i, blocks in spec.blocks.items():
        src = source.bases.get(i)
        tgt = target.bases.get(i)
        if not src or not tgt:
            continue
        mats = {}
        for (a, b), fn in blocks.items():
            mats[(b, a)] = matrix_of(fn, src[a], tgt[b])
        maps[i] = stack_blocks([len(x) for x in tgt], [len(x) for x in src], mats)
    return ChainMap(spec, source, target, maps)


def verify_chain_map(f: ChainMap) -> list[int]:
    """Positions i where d'_i f_i != f_{i-1} d_i."""
    bad = []
    positions = set(f.source.positions()) | set(f.target.positions())
    for i in sorted(positions):
        if f.source.dim(i) == 0 and f.target.dim(i) == 0:
            continue
        lhs = f.target.differential(i) @ f.at(i)
        rhs = f.at(i - 1) @ f.source.differential(i)
        if lhs != rhs:
            bad.append(i)
    return bad


def psi_spec(dims: Dims, r: int, s: int, sign_M: int = 1, sign_nu: int = 1) -> ChainMapSpec:
    """psi: C^{r,s} -> C^{r-1,s}.

    For r = 1 the x_g blocks on M summands carry ``sign_M`` and nu carries
    ``sign_nu``; for r >= 2 both are ignored.
    """
    e, g = dims.e, dims.g
    if not 1 <= r <= e + g - 1:
        raise OutOfRange(f"psi needs 1 <= r <= {e + g - 1}, got {r}")
    source = C_complex(dims, r, s)
    target = C_complex(dims, r - 1, s)
    xg_M = _fn(apply_xg_M, dims)
    xg_N = _fn(apply_xg_N, dims)
    blocks: dict = {}
    for i, src in source.terms.items():
        tgt = target.terms.get(i)
        if not tgt:
            continue
        bl = {}
        for a, sa in enumerate(src):
            for b, sb in enumerate(tgt):
                fn = None
                if sa.kind == "M" and sb.kind == "M":
                    fn = xg_M if (r >= 2 or sign_M == 1) else _negated(xg_M)
                elif sa.kind == "N" and sb.kind == "N":
                    fn = xg_N
                elif sa.kind == "M" and sb.kind == "N" and r >= 2:
                    fn = _fn(apply_N, dims)
                elif sa.kind == "M" and sb.kind == "B" and r == 1:
                    fn = _fn(apply_nu, dims)
                    if sign_nu == -1:
                        fn = _negated(fn)
                if fn is not None:
                    bl[(a, b)] = fn
        if bl:
            blocks[i] = bl
    return ChainMapSpec(source, target, blocks, {"sign_M": sign_M, "sign_nu": sign_nu})


def build_psi(dims: Dims, r: int, s: int, basis_of=None, target_basis_of=None):
    """Realize psi, resolving the undetermined signs when r = 1.

    Returns (ChainMap, failing positions, signs used).  When r = 1 every
    sign choice is tried and the first one that commutes is kept.
    """
    choices = [(1, 1)] if r >= 2 else [(1, 1), (-1, 1), (1, -1), (-1, -1)]
    src_cx = tgt_cx = None
    best = None
    for sign_M, sign_nu in choices:
        spec = psi_spec(dims, r, s, sign_M, sign_nu)
        if src_cx is None:
            src_cx = realize(spec.source, basis_of)
            tgt_cx = realize(spec.target, target_basis_of or basis_of)
        fmap = realize_map(spec, src_cx, tgt_cx)
        bad = verify_chain_map(fmap)
        if best is None or len(bad) < len(best[1]):
            best = (fmap, bad, {"sign_M": sign_M, "sign_nu": sign_nu})
        if not bad:
            break
    return best


__all__ = [
    "BasisMismatch",
    "ChainComplex",
    "ChainMap",
    "ChainMapSpec",
    "ComplexSpec",
    "C_complex",
    "C_position_range",
    "C_terms",
    "M_complex",
    "N_complex",
    "Summand",
    "apply_D",
    "apply_Gamma",
    "apply_K",
    "apply_M",
    "apply_N",
    "apply_gamma",
    "apply_linear",
    "apply_nu",
    "apply_xg_M",
    "apply_xg_N",
    "build_psi",
    "build_zeta",
    "evaluate_M_pair",
    "full_basis",
    "matrix_D",
    "matrix_Gamma",
    "matrix_K",
    "matrix_M",
    "matrix_N_map",
    "matrix_gamma",
    "matrix_of",
    "psi_spec",
    "realize",
    "realize_map",
    "summand_is_zero",
    "verify_chain_map",
    "verify_complex",
]
