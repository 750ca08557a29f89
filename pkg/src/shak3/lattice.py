"""Integral lattices: duals, discriminant groups, complements, saturation."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod
from typing import Optional, Tuple

from .errors import DegenerateForm, InvalidInput, NotASublattice, ZeroClass
from .linalg import (
    frac,
    int_det,
    inverse,
    is_integral,
    left_nullspace,
    matmul,
    matvec,
    solve,
    transpose,
    common_denominator,
    dot,
)
from .normal_forms import integer_kernel, lattice_hnf_basis, snf_with_transform


def _as_int_rows(m, name) -> Tuple[Tuple[int, ...], ...]:
    rows = []
    for i, row in enumerate(m):
        out = []
        for j, x in enumerate(row):
            x = frac(x)
            if x.denominator != 1:
                raise InvalidInput(f"entry ({i},{j}) is not an integer", name)
            out.append(x.numerator)
        rows.append(tuple(out))
    return tuple(rows)


@dataclass(frozen=True)
class IntLattice:
    """Free Z-module of finite rank with an integral symmetric bilinear form.

    ``basis`` (optional) lists the basis vectors in the coordinates of an
    ambient lattice; it is stored, not interpreted, until an operation
    needs the ambient form.
    """

    gram: Tuple[Tuple[int, ...], ...]
    basis: Optional[Tuple[Tuple[Fraction, ...], ...]] = None
    _det: int = field(init=False, repr=False, compare=False)

    def __init__(self, gram, basis=None):
        g = _as_int_rows(gram, "gram")
        n = len(g)
        if any(len(row) != n for row in g):
            raise InvalidInput("gram matrix is not square", "gram")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(i)):
            raise InvalidInput("gram matrix is not symmetric", "gram")
        object.__setattr__(self, "gram", g)
        if basis is not None:
            b = tuple(tuple(frac(x) for x in v) for v in basis)
            if len(b) != n:
                raise InvalidInput(f"expected {n} basis vectors, got {len(b)}", "basis")
            if len({len(v) for v in b}) > 1:
                raise InvalidInput("basis vectors have different lengths", "basis")
            basis = b
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "_det", int_det(g) if n else 1)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def det(self) -> int:
        return self._det

    @property
    def is_degenerate(self) -> bool:
        return self._det == 0

    def require_nondegenerate(self):
        if self._det == 0:
            raise DegenerateForm("bilinear form has zero determinant")

    def pair(self, u, v):
        return dot(u, matvec(self.gram, v))

    def matrix(self):
        return [list(r) for r in self.gram]

    def check_basis_against(self, ambient: "IntLattice") -> bool:
        """True iff the stored gram equals the ambient form on the stored basis."""
        if self.basis is None:
            return False
        return all(
            ambient.pair(u, v) == self.gram[i][j]
            for i, u in enumerate(self.basis)
            for j, v in enumerate(self.basis)
        )


@dataclass(frozen=True)
class FinAbGroup:
    """W/L for lattices L in W, as invariant factors plus generator lifts.

    ``generator_lifts[i]`` has order exactly ``invariant_factors[i]``
    modulo the lattice spanned by ``denominator`` .
    """

    invariant_factors: Tuple[int, ...]
    generator_lifts: Tuple[Tuple[Fraction, ...], ...]
    denominator: Tuple[Tuple[Fraction, ...], ...] = ()

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def __str__(self):
        if not self.invariant_factors:
            return "0"
        return " + ".join(f"Z/{d}" for d in self.invariant_factors)


def coordinates(basis, v) -> Optional[list]:
    """Rational coordinates of ``v`` in the given basis (list of vectors)."""
    if not basis:
        return [] if not any(v) else None
    return solve(transpose(basis), list(v))


def quotient_group(carrier, sub) -> FinAbGroup:
    """Structure of span_Z(carrier)/span_Z(sub) when both have the same rank.

    ``carrier`` must be a basis; ``sub`` may be any generating set.
    """
    carrier = [list(map(frac, v)) for v in carrier]
    k = len(carrier)
    sub = lattice_hnf_basis(sub, len(carrier[0])) if carrier else []
    if len(sub) != k:
        raise NotASublattice("quotient is not finite: ranks differ")
    C = []
    for v in sub:
        c = coordinates(carrier, v)
        if c is None or not is_integral(c):
            raise NotASublattice("sub-generator does not lie in the carrier lattice")
        C.append([int(x) for x in c])
    Cm = transpose(C, k)  # columns are coordinates of sub generators
    U, D, _ = _snf_parts(Cm)
    Uinv = inverse(U)
    W = transpose(carrier)
    Wp = matmul(W, Uinv)
    factors, lifts = [], []
    for i in range(k):
        d = abs(D[i])
        if d == 0:
            raise NotASublattice("quotient is not finite")
        if d >= 2:
            factors.append(d)
            lifts.append(tuple(row[i] for row in Wp))
    return FinAbGroup(tuple(factors), tuple(lifts), tuple(tuple(v) for v in sub))


def _snf_parts(m):
    res = snf_with_transform(m)
    return res.U, res.diagonal, res.V


def dual_lattice(L: IntLattice) -> list:
    """Basis of L* = {v in L (x) Q : (v.x) in Z for all x in L}, in L-coordinates."""
    L.require_nondegenerate()
    ginv = inverse(L.matrix())
    cols = transpose(ginv)
    return lattice_hnf_basis(cols, L.rank)


def discriminant_group(L: IntLattice) -> FinAbGroup:
    """L*/L with lifts in L-coordinates; order is |det gram|."""
    L.require_nondegenerate()
    n = L.rank
    if n == 0:
        return FinAbGroup((), ())
    unit = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return quotient_group(dual_lattice(L), unit)


def _ambient_basis(sub: IntLattice):
    if sub.basis is None:
        raise NotASublattice("sublattice has no basis in ambient coordinates")
    for v in sub.basis:
        if not is_integral(v):
            raise NotASublattice("basis vector is not integral in the ambient lattice")
    return [[int(x) for x in v] for v in sub.basis]


def sublattice(ambient: IntLattice, vectors) -> IntLattice:
    """The lattice spanned by integral ambient vectors (assumed independent)."""
    vecs = [list(v) for v in vectors]
    gram = [[ambient.pair(u, v) for v in vecs] for u in vecs]
    return IntLattice(gram, vecs)


def orthogonal_complement(sub: IntLattice, ambient: IntLattice) -> IntLattice:
    """Primitive lattice sub^perp inside ambient, with HNF basis."""
    ambient.require_nondegenerate()
    B = _ambient_basis(sub)
    n = ambient.rank
    if not B:
        vecs = [[int(i == j) for j in range(n)] for i in range(n)]
    else:
        A = [matvec(ambient.matrix(), b) for b in B]  # rows: x -> (b.x)
        ker = integer_kernel(A, n)
        vecs = [[int(x) for x in v] for v in lattice_hnf_basis(ker, n)]
    return sublattice(ambient, vecs)


def saturation_basis(vectors, n: int) -> list:
    """HNF basis of (span_Q vectors) intersected with Z^n."""
    vectors = [list(v) for v in vectors if any(v)]
    if not vectors:
        return []
    ann = left_nullspace(transpose(vectors))  # covectors killing the span
    if not ann:
        basis = [[int(i == j) for j in range(n)] for i in range(n)]
    else:
        rows = []
        for y in ann:
            d = common_denominator(y)
            rows.append([int(x * d) for x in y])
        basis = integer_kernel(rows, n)
    return [[int(x) for x in v] for v in lattice_hnf_basis(basis, n)]


def primitivity(sub: IntLattice, ambient: IntLattice) -> tuple[bool, IntLattice]:
    """(is_primitive, saturation of sub in ambient)."""
    B = _ambient_basis(sub)
    n = ambient.rank
    sat = saturation_basis(B, n)
    own = lattice_hnf_basis(B, n)
    is_prim = [list(map(frac, v)) for v in sat] == own
    if is_prim:
        return True, sub
    return False, sublattice(ambient, sat)


def divisibility(L: IntLattice, h) -> int:
    """Positive generator m of the ideal {(x.h) : x in L}."""
    if not is_integral(h):
        raise InvalidInput("class must have integer coordinates", "h")
    h = [int(frac(x)) for x in h]
    if len(h) != L.rank:
        raise InvalidInput(f"class has length {len(h)}, lattice rank is {L.rank}", "h")
    if not any(h):
        raise ZeroClass("class is zero")
    L.require_nondegenerate()
    m = 0
    for x in matvec(L.matrix(), h):
        m = gcd(m, x)
    if m == 0:
        raise ZeroClass("class pairs to zero with the whole lattice")
    return m


def is_primitive_vector(h) -> bool:
    g = 0
    for x in h:
        g = gcd(g, int(x))
    return g == 1
