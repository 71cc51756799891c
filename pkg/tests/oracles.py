"""Brute-force reference computations used only by the tests."""

from itertools import combinations, product
from math import gcd

from sympy import Matrix
from sympy.polys.domains import GF as SympyGF
from sympy.polys.domains import QQ as SympyQQ
from sympy.polys.matrices import DomainMatrix


def gcd_of_minors(dense, k):
    """gcd of all k x k minors of an integer matrix given as rows."""
    nrows = len(dense)
    ncols = len(dense[0]) if dense else 0
    out = 0
    for rs in combinations(range(nrows), k):
        for cs in combinations(range(ncols), k):
            out = gcd(out, int(Matrix([[dense[r][c] for c in cs] for r in rs]).det()))
    return out


def invariant_factors_by_minors(dense):
    """Invariant factors d_k = D_k / D_{k-1} with D_k the gcd of k x k minors."""
    out = []
    prev = 1
    k = 1
    while k <= min(len(dense), len(dense[0]) if dense else 0):
        cur = gcd_of_minors(dense, k)
        if cur == 0:
            break
        out.append(cur // prev)
        prev = cur
        k += 1
    return out


def sympy_rank(dense, p=None):
    nrows = len(dense)
    ncols = len(dense[0]) if dense else 0
    if nrows == 0 or ncols == 0:
        return 0
    dom = SympyQQ if p is None else SympyGF(p)
    dm = DomainMatrix([[dom(x) for x in row] for row in dense], (nrows, ncols), dom)
    return dm.rank()


def count_ssyt(shape, rank):
    """Semistandard Young tableaux of ``shape`` with entries in 1..rank, by brute force."""
    cells = [(i, j) for i, row in enumerate(shape) for j in range(row)]
    count = 0
    for filling in product(range(1, rank + 1), repeat=len(cells)):
        t = dict(zip(cells, filling))
        ok = all(
            (j == 0 or t[(i, j - 1)] <= t[(i, j)]) and (i == 0 or t[(i - 1, j)] < t[(i, j)]) for (i, j) in cells
        )
        count += ok
    return count

