"""Hermite and Smith normal forms of integer matrices, with transforms.

HNF convention (column style): ``M V = H`` with ``V`` unimodular; the
nonzero columns of ``H`` come first, column ``j`` has its pivot (first
nonzero entry, positive) in row ``r_j`` with ``r_0 < r_1 < ...``, and every
entry of row ``r_j`` to the left of the pivot lies in ``[0, pivot)``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, NamedTuple, Optional

from .linalg import common_denominator, identity, transpose


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


class HNF(NamedTuple):
    H: List[List[int]]
    V: List[List[int]]
    rank: int
    pivot_rows: List[int]


def hnf_with_transform(m, track=True) -> HNF:
    """Column Hermite normal form of an integer matrix ``m`` (n x k)."""
    n = len(m)
    k = len(m[0]) if n else 0
    # work on columns
    cols = [[int(m[i][j]) for i in range(n)] for j in range(k)]
    vcols = [[int(i == j) for i in range(k)] for j in range(k)] if track else None
    c = 0
    pivot_rows = []
    for i in range(n):
        if c == k:
            break
        for j in range(c + 1, k):
            b = cols[j][i]
            if b == 0:
                continue
            a = cols[c][i]
            if a != 0 and b % a == 0:
                q = b // a
                cols[j] = [y - q * x for x, y in zip(cols[c], cols[j])]
                if track:
                    vcols[j] = [y - q * x for x, y in zip(vcols[c], vcols[j])]
                continue
            g, x, y = xgcd(a, b)
            ag, bg = a // g, b // g
            cc, cj = cols[c], cols[j]
            cols[c] = [x * u + y * w for u, w in zip(cc, cj)]
            cols[j] = [ag * w - bg * u for u, w in zip(cc, cj)]
            if track:
                vc, vj = vcols[c], vcols[j]
                vcols[c] = [x * u + y * w for u, w in zip(vc, vj)]
                vcols[j] = [ag * w - bg * u for u, w in zip(vc, vj)]
        piv = cols[c][i]
        if piv == 0:
            continue
        if piv < 0:
            cols[c] = [-x for x in cols[c]]
            if track:
                vcols[c] = [-x for x in vcols[c]]
            piv = -piv
        for j in range(c):
            q = cols[j][i] // piv
            if q:
                cols[j] = [y - q * x for x, y in zip(cols[c], cols[j])]
                if track:
                    vcols[j] = [y - q * x for x, y in zip(vcols[c], vcols[j])]
        pivot_rows.append(i)
        c += 1
    H = transpose(cols, n)
    V = transpose(vcols, k) if track else []
    return HNF(H, V, c, pivot_rows)


def hnf(m) -> List[List[int]]:
    return hnf_with_transform(m, track=False).H


class SNF(NamedTuple):
    D: List[List[int]]
    U: List[List[int]]
    V: List[List[int]]

    @property
    def diagonal(self) -> List[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]


def snf_with_transform(m) -> SNF:
    """Smith normal form ``U m V = D`` with U, V unimodular."""
    n = len(m)
    k = len(m[0]) if n else 0
    a = [[int(x) for x in row] for row in m]
    U = identity(n)
    V = identity(k)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x - q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in a:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    for t in range(min(n, k)):
        while True:
            best = None
            for i in range(t, n):
                for j in range(t, k):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return SNF(a, U, V)
            if best[0] != t:
                swap_rows(t, best[0])
            if best[1] != t:
                swap_cols(t, best[1])
            piv = a[t][t]
            dirty = False
            for i in range(t + 1, n):
                if a[i][t]:
                    add_row(i, t, a[i][t] // piv)
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, k):
                if a[t][j]:
                    add_col(j, t, a[t][j] // piv)
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, n) for j in range(t + 1, k) if a[i][j] % piv),
                None,
            )
            if bad is None:
                break
            # fold the offending row into row t and keep reducing
            add_row(t, bad[0], -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
    return SNF(a, U, V)


def invariant_factors_of(m) -> List[int]:
    """Nonzero SNF diagonal entries of an integer matrix (including 1s)."""
    return [d for d in snf_with_transform(m).diagonal if d]


def integer_kernel(m, ncols: Optional[int] = None) -> List[List[int]]:
    """Basis (list of vectors) of {x in Z^k : m x = 0}; always saturated."""
    if not m:
        k = ncols or 0
        return [[int(i == j) for j in range(k)] for i in range(k)]
    res = hnf_with_transform(m)
    k = len(m[0])
    return [[res.V[i][j] for i in range(k)] for j in range(res.rank, k)]


def solve_integer(a, b) -> Optional[List[int]]:
    """An integer solution x of a x = b, or ``None``."""
    n = len(a)
    k = len(a[0]) if n else 0
    res = hnf_with_transform(a)
    H, V = res.H, res.V
    y = []
    for j, r in enumerate(res.pivot_rows):
        s = int(b[r]) - sum(H[r][l] * y[l] for l in range(j))
        if s % H[r][j]:
            return None
        y.append(s // H[r][j])
    for i in range(n):
        if sum(H[i][l] * y[l] for l in range(res.rank)) != b[i]:
            return None
    return [sum(V[i][l] * y[l] for l in range(res.rank)) for i in range(k)]


def lattice_hnf_basis(vectors, dim: int) -> List[List[Fraction]]:
    """Canonical basis of the Z-span of rational vectors in Q^dim.

    Returned as the nonzero columns of the column HNF of the generator
    matrix (scaled to be integral, then scaled back).
    """
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return []
    d = common_denominator(x for v in vectors for x in v)
    cols = [[int(Fraction(x) * d) for x in v] for v in vectors]
    res = hnf_with_transform(transpose(cols, dim), track=False)
    H = res.H
    return [[Fraction(H[i][j], d) for i in range(dim)] for j in range(res.rank)]
