"""Exact dense linear algebra over Z and Q.

Matrices are lists of rows; vectors are lists.  Entries are ``int`` or
``fractions.Fraction`` and are never converted to floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import List, Optional, Sequence

Matrix = List[list]
Vector = list


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def frac_vec(v) -> List[Fraction]:
    return [frac(x) for x in v]


def frac_mat(m) -> List[List[Fraction]]:
    return [[frac(x) for x in row] for row in m]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(n: int, k: int) -> Matrix:
    return [[0] * k for _ in range(n)]


def transpose(m: Sequence[Sequence], ncols: Optional[int] = None) -> Matrix:
    """Transpose; ``ncols`` fixes the row count of the result when ``m`` is empty."""
    if not m:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*m)]


def dot(u, v):
    # matrices here are sparse; skipping zeros avoids most Fraction work
    return sum((a * b for a, b in zip(u, v) if a and b), 0)


def matvec(m, v) -> Vector:
    return [dot(row, v) for row in m]


def matmul(a, b) -> Matrix:
    if not a:
        return []
    bt = transpose(b, len(b[0]) if b else 0)
    if not bt:
        return [[] for _ in a]
    return [[dot(row, col) for col in bt] for row in a]


def vec_add(u, v) -> Vector:
    return [a + b for a, b in zip(u, v)]


def vec_sub(u, v) -> Vector:
    return [a - b for a, b in zip(u, v)]


def vec_scale(c, v) -> Vector:
    return [c * a for a in v]


def is_integral(v) -> bool:
    return all(frac(x).denominator == 1 for x in v)


def is_integral_matrix(m) -> bool:
    return all(is_integral(row) for row in m)


def common_denominator(entries) -> int:
    d = 1
    for x in entries:
        d = lcm(d, frac(x).denominator)
    return d


def to_int_vec(v) -> List[int]:
    out = []
    for x in v:
        x = frac(x)
        if x.denominator != 1:
            raise ValueError(f"non-integral entry {x}")
        out.append(x.numerator)
    return out


def to_int_mat(m) -> List[List[int]]:
    return [to_int_vec(row) for row in m]


def content(v) -> int:
    """gcd of the entries of an integer vector (0 for the zero vector)."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def rref(m) -> tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form over Q and its pivot columns."""
    a = frac_mat(m)
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv if x else x for x in a[r]]
        piv_row = a[r]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y if y else x for x, y in zip(a[i], piv_row)]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(m) -> int:
    return len(rref(m)[1]) if m else 0


def nullspace(m, ncols: Optional[int] = None) -> List[List[Fraction]]:
    """Basis of the right null space {x : m x = 0} over Q."""
    if not m:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    n = len(m[0])
    red, pivots = rref(m)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def left_nullspace(m, nrows: Optional[int] = None) -> List[List[Fraction]]:
    """Rows k with k m = 0, spanning all such covectors."""
    n = len(m) if m else (nrows or 0)
    if not m or not m[0]:
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return nullspace(transpose(m))


def solve(a, b) -> Optional[List[Fraction]]:
    """One rational solution x of a x = b, or ``None`` if inconsistent."""
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    if nrows == 0:
        return [Fraction(0)] * ncols
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return x


def solve_matrix(a, b_cols) -> Optional[List[List[Fraction]]]:
    """Solve a x = b for each vector in ``b_cols`` with one elimination.

    ``None`` if any system is inconsistent.
    """
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    k = len(b_cols)
    if nrows == 0:
        return [[Fraction(0)] * ncols for _ in range(k)]
    aug = [list(row) + [b[i] for b in b_cols] for i, row in enumerate(a)]
    red, pivots = rref(aug)
    if any(p >= ncols for p in pivots):
        return None
    out = []
    for j in range(k):
        x = [Fraction(0)] * ncols
        for row, p in zip(red, pivots):
            x[p] = row[ncols + j]
        out.append(x)
    return out


class CoordinateSolver:
    """Coordinates in a fixed independent family, with one elimination up front."""

    def __init__(self, basis):
        self.basis = [frac_vec(b) for b in basis]
        k = len(self.basis)
        if k:
            _, rows = rref(self.basis)  # pivot columns = independent coordinates
            if len(rows) != k:
                raise ValueError("basis vectors are dependent")
            self.rows = rows
            self.inv = inverse([[b[r] for b in self.basis] for r in rows])
        else:
            self.rows, self.inv = [], []

    def __call__(self, v) -> Optional[List[Fraction]]:
        v = frac_vec(v)
        c = matvec(self.inv, [v[r] for r in self.rows])
        n = len(v)
        for i in range(n):
            if sum((ci * b[i] for ci, b in zip(c, self.basis) if ci and b[i]), Fraction(0)) != v[i]:
                return None
        return c


def det(m) -> Fraction:
    n = len(m)
    a = frac_mat(m)
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            result = -result
        result *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return result


def int_det(m) -> int:
    d = det(m)
    assert d.denominator == 1
    return d.numerator


def inverse(m) -> List[List[Fraction]]:
    n = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def signature(gram) -> tuple[int, int]:
    """(n_plus, n_minus) of a symmetric rational matrix by symmetric elimination."""
    a = frac_mat(gram)
    n = len(a)
    pos = neg = 0
    active = list(range(n))
    while active:
        i = next((k for k in active if a[k][k] != 0), None)
        if i is None:
            pair = next(((k, l) for k in active for l in active if k < l and a[k][l] != 0), None)
            if pair is None:
                break
            k, l = pair
            # x_k -> x_k + x_l makes the diagonal entry 2 a_kl nonzero
            for j in range(n):
                a[k][j] += a[l][j]
            for j in range(n):
                a[j][k] += a[j][l]
            i = k
        piv = a[i][i]
        if piv > 0:
            pos += 1
        else:
            neg += 1
        active.remove(i)
        for r in active:
            if a[r][i] != 0:
                f = a[r][i] / piv
                for j in range(n):
                    a[r][j] -= f * a[i][j]
                for j in range(n):
                    a[j][r] -= f * a[j][i]
    return pos, neg
