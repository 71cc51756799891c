"""Multigraded strands and chessboard complexes.

Every map in the package preserves a content vector in N^e x N^g, so each
complex splits into independent strands.  This module names the strand of
each basis element, enumerates strand bases directly (without listing the
whole module) and deduplicates strands related by permuting rows and/or
columns of the board.

Strand keys, for a basis element of each kind:

* N(m,n,p):  (v + rows(w), x + cols(w))
* M(m,n,p) inside M(P,Q):  (u + rows(z), y + cols(z))
* M(m,n,p) inside C^{r,s}:  (g-1-a, e-1-c) where (a, c) is the content above
* B(p) inside C^{0,s}:  (g-1-rows(z), e-cols(z))
* B(p) inside C^{e+g,s}:  (g-rows(z), e-1-cols(z))

so that all maps of C^{r,s} connect equal keys.
"""

from __future__ import annotations

from collections import Counter
from math import factorial
from typing import Iterator, NamedTuple

from .complexes import ChainComplex, ComplexSpec, Summand, realize, summand_is_zero
from .errors import DegreeMismatch
from .exact_linalg import AbelianGroupInvariants, ScalarRing, SparseMatrix, ZZ, homology_pair
from .multilinear import Dims, MBasis, NBasis, bounded_subsets, compositions


class MultiDegree(NamedTuple):
    gamma: tuple
    delta: tuple


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _complement(const, v):
    return tuple(const - x for x in v)


def content_key(dims: Dims, params: dict, summand: Summand, elem) -> MultiDegree:
    kind = params["kind"]
    if summand.kind == "N":
        return MultiDegree(
            tuple(a + b for a, b in zip(elem.v, dims.row_content(elem.w))),
            tuple(a + b for a, b in zip(elem.x, dims.col_content(elem.w))),
        )
    if summand.kind == "M":
        a = tuple(x + y for x, y in zip(elem.u, dims.row_content(elem.z)))
        c = tuple(x + y for x, y in zip(elem.y, dims.col_content(elem.z)))
        if kind == "C":
            return MultiDegree(_complement(dims.g - 1, a), _complement(dims.e - 1, c))
        return MultiDegree(a, c)
    rows, cols = dims.row_content(elem), dims.col_content(elem)
    if params["r"] == 0:
        return MultiDegree(_complement(dims.g - 1, rows), _complement(dims.e, cols))
    return MultiDegree(_complement(dims.g, rows), _complement(dims.e - 1, cols))


def strand_basis(dims: Dims, params: dict, summand: Summand, key: MultiDegree) -> tuple:
    """Basis of one summand restricted to the strand ``key``, in a fixed order."""
    if summand_is_zero(dims, summand):
        return ()
    gamma, delta = key
    if len(gamma) != dims.e or len(delta) != dims.g:
        raise DegreeMismatch("multidegree has the wrong shape")
    m, n, p = summand.m, summand.n, summand.p
    if summand.kind == "N":
        if sum(gamma) != m + p or sum(delta) != n + p:
            return ()
        out = []
        for w in bounded_subsets(dims, p, gamma, delta):
            out.append(NBasis(_sub(gamma, dims.row_content(w)), _sub(delta, dims.col_content(w)), w))
        return tuple(out)
    if summand.kind == "M":
        if params["kind"] == "C":
            a, c = _complement(dims.g - 1, gamma), _complement(dims.e - 1, delta)
        else:
            a, c = gamma, delta
        if sum(a) != m + p or sum(c) != n + p:
            return ()
        out = []
        for z in bounded_subsets(dims, p, a, c):
            out.append(MBasis(_sub(a, dims.row_content(z)), _sub(c, dims.col_content(z)), z))
        return tuple(out)
    if params["r"] == 0:
        rows, cols = _complement(dims.g - 1, gamma), _complement(dims.e, delta)
    else:
        rows, cols = _complement(dims.g, gamma), _complement(dims.e - 1, delta)
    return tuple(bounded_subsets(dims, p, rows, cols, row_exact=True, col_exact=True))


def _candidate_keys(dims: Dims, spec: ComplexSpec) -> set:
    e, g = dims.e, dims.g
    kind = spec.params["kind"]
    keys = set()
    for summands in spec.terms.values():
        for s in summands:
            if summand_is_zero(dims, s):
                continue
            if s.kind == "N":
                for gam in compositions(s.m + s.p, e):
                    for dl in compositions(s.n + s.p, g):
                        keys.add(MultiDegree(gam, dl))
            elif s.kind == "M":
                for a in compositions(s.m + s.p, e):
                    for c in compositions(s.n + s.p, g):
                        if kind == "C":
                            keys.add(MultiDegree(_complement(g - 1, a), _complement(e - 1, c)))
                        else:
                            keys.add(MultiDegree(a, c))
            else:
                r = spec.params["r"]
                for rows in compositions(s.p, e):
                    if max(rows, default=0) > g:
                        continue
                    for cols in compositions(s.p, g):
                        if max(cols, default=0) > e:
                            continue
                        if r == 0:
                            keys.add(MultiDegree(_complement(g - 1, rows), _complement(e, cols)))
                        else:
                            keys.add(MultiDegree(_complement(g, rows), _complement(e - 1, cols)))
    return keys


def distinct_permutations_count(v) -> int:
    out = factorial(len(v))
    for c in Counter(v).values():
        out //= factorial(c)
    return out


def default_symmetry(spec: ComplexSpec) -> str:
    """Which board symmetries act on the strands of ``spec``.

    Row and column permutations act on N(P,Q), M(P,Q) and on C^{r,s} for
    r in {0, e+g}.  The maps M_m single out the order of the columns, so
    only row permutations are used for the other C^{r,s}.  The negative
    control breaks every symmetry.
    """
    if spec.params.get("negate_M"):
        return "none"
    if spec.params["kind"] in ("N", "M"):
        return "full"
    r = spec.params["r"]
    if r == 0 or r == spec.dims.e + spec.dims.g:
        return "full"
    return "rows"


def canonical_key(key: MultiDegree, symmetry: str) -> MultiDegree:
    if symmetry == "none":
        return key
    gamma = tuple(sorted(key.gamma, reverse=True))
    delta = tuple(sorted(key.delta, reverse=True)) if symmetry == "full" else key.delta
    return MultiDegree(gamma, delta)


def orbit_size(key: MultiDegree, symmetry: str) -> int:
    if symmetry == "none":
        return 1
    n = distinct_permutations_count(key.gamma)
    if symmetry == "full":
        n *= distinct_permutations_count(key.delta)
    return n


def strand_keys(spec: ComplexSpec, symmetry: str | None = None) -> list[tuple[MultiDegree, int]]:
    """Representative strand keys with orbit sizes, in a deterministic order."""
    if symmetry is None:
        symmetry = default_symmetry(spec)
    reps = {canonical_key(k, symmetry) for k in _candidate_keys(spec.dims, spec)}
    return [(k, orbit_size(k, symmetry)) for k in sorted(reps, reverse=True)]


def strand_complex(spec: ComplexSpec, key: MultiDegree) -> ChainComplex:
    dims, params = spec.dims, spec.params
    return realize(spec, lambda s: strand_basis(dims, params, s, key))


def iter_strands(spec: ComplexSpec, symmetry: str | None = None) -> Iterator[tuple[MultiDegree, int, ChainComplex]]:
    for key, mult in strand_keys(spec, symmetry):
        cx = strand_complex(spec, key)
        if any(cx.dim(i) for i in cx.positions()):
            yield key, mult, cx


def content_violations(cx: ChainComplex) -> list[tuple[int, int, int]]:
    """(position, row, col) of differential entries joining different strands."""
    spec = cx.spec
    dims = spec.dims
    bad = []
    for i, d in cx.diffs.items():
        src_keys = [content_key(dims, spec.params, s, b) for s, basis in zip(spec.terms[i], cx.bases[i]) for b in basis]
        tgt_keys = [
            content_key(dims, spec.params, s, b) for s, basis in zip(spec.terms[i - 1], cx.bases[i - 1]) for b in basis
        ]
        for (row, col), _ in d.items():
            if src_keys[col] != tgt_keys[row]:
                bad.append((i, row, col))
    return bad


# ---------------------------------------------------------------------------
# chessboard complexes


class ChessboardComplex:
    """Square sets of an e x g board with at most gamma_i per row and delta_j per column."""

    def __init__(self, gamma, delta):
        self.gamma = tuple(gamma)
        self.delta = tuple(delta)
        if any(x < 0 for x in self.gamma + self.delta):
            raise DegreeMismatch("chessboard bounds must be non-negative")
        self.board = Dims(len(self.gamma), len(self.delta))

    def faces(self, dim: int) -> tuple:
        """Faces of dimension ``dim`` (dim = -1 gives the empty face)."""
        return tuple(bounded_subsets(self.board, dim + 1, self.gamma, self.delta))

    def f_vector(self) -> list[int]:
        out = []
        k = 0
        while True:
            n = len(self.faces(k))
            if n == 0:
                return out
            out.append(n)
            k += 1

    def boundary(self, dim: int) -> SparseMatrix:
        """Boundary from dim-faces to (dim-1)-faces, the empty face included."""
        src = self.faces(dim)
        tgt = self.faces(dim - 1)
        index = {f: i for i, f in enumerate(tgt)}
        columns = []
        for f in src:
            col = {}
            for t in range(len(f)):
                col[index[f[:t] + f[t + 1 :]]] = -1 if t % 2 else 1
            columns.append(col)
        return SparseMatrix.from_columns(len(tgt), columns)

    def reduced_homology(self, dim: int, ring: ScalarRing = ZZ) -> AbelianGroupInvariants:
        return homology_pair(self.boundary(dim + 1), self.boundary(dim), ring)


def chessboard_complex(gamma, delta) -> ChessboardComplex:
    return ChessboardComplex(gamma, delta)


def simplicial_reduced_homology(sc: ChessboardComplex, dim: int, ring: ScalarRing = ZZ) -> AbelianGroupInvariants:
    return sc.reduced_homology(dim, ring)


__all__ = [
    "ChessboardComplex",
    "MultiDegree",
    "canonical_key",
    "chessboard_complex",
    "content_key",
    "content_violations",
    "default_symmetry",
    "distinct_permutations_count",
    "iter_strands",
    "orbit_size",
    "simplicial_reduced_homology",
    "strand_basis",
    "strand_complex",
    "strand_keys",
]
