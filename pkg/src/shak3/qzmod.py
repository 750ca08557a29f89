"""Q/Z-modules presented as quotients W/L of subgroups of Q^n.

A carrier ``W`` is a *subgroup*: a rational subspace plus a lattice, which
covers the three shapes that occur (the full space Q^n, a lattice, and
mixtures such as {v : (v.h) in Z}).  The denominator ``L`` is always a
lattice.  Morphisms are rational matrices between the ambient spaces and
are only ever evaluated on generators, never on element tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple

from .errors import InvalidInput, NotInCarrier, NotPresentable, NotWellDefined
from .lattice import FinAbGroup, quotient_group
from .linalg import (
    CoordinateSolver,
    common_denominator,
    dot,
    frac_vec,
    is_integral,
    left_nullspace,
    matmul,
    matvec,
    nullspace,
    rref,
    solve_matrix,
    transpose,
)
from .normal_forms import integer_kernel, lattice_hnf_basis

INFINITE = math.inf

Vec = Tuple[Fraction, ...]


def _vec(v) -> Vec:
    return tuple(frac_vec(v))


@dataclass(frozen=True)
class Subgroup:
    """V + Λ inside Q^dim, stored canonically.

    ``divisible`` is the RREF basis of the subspace V; ``lattice`` is the
    HNF basis of Λ after reducing away the pivot coordinates of V, so two
    equal subgroups always have equal fields.
    """

    dim: int
    divisible: Tuple[Vec, ...] = ()
    lattice: Tuple[Vec, ...] = ()
    pivots: Tuple[int, ...] = field(default=(), compare=False)

    @classmethod
    def from_generators(cls, dim, divisible=(), lattice=()) -> "Subgroup":
        div = [list(v) for v in divisible if any(v)]
        if div:
            rows, piv = rref(div)
        else:
            rows, piv = [], []
        g = cls(dim, tuple(_vec(r) for r in rows), (), tuple(piv))
        reduced = [g.reduce(v) for v in lattice]
        lat = lattice_hnf_basis(reduced, dim)
        return cls(dim, g.divisible, tuple(_vec(v) for v in lat), tuple(piv))

    @classmethod
    def full(cls, dim) -> "Subgroup":
        return cls.from_generators(dim, divisible=_unit(dim))

    @classmethod
    def of_lattice(cls, vectors, dim) -> "Subgroup":
        return cls.from_generators(dim, lattice=vectors)

    @classmethod
    def zero(cls, dim) -> "Subgroup":
        return cls(dim)

    @property
    def divisible_rank(self) -> int:
        return len(self.divisible)

    @property
    def lattice_rank(self) -> int:
        return len(self.lattice)

    @property
    def span_dim(self) -> int:
        return len(self.divisible) + len(self.lattice)

    @property
    def is_lattice(self) -> bool:
        return not self.divisible

    @property
    def is_full_space(self) -> bool:
        return len(self.divisible) == self.dim

    def reduce(self, v) -> List[Fraction]:
        """Kill the V-component by clearing V's pivot coordinates."""
        v = frac_vec(v)
        for row, p in zip(self.divisible, self.pivots):
            c = v[p]
            if c:
                v = [x - c * y for x, y in zip(v, row)]
        return v

    def reduction_matrix(self):
        """Matrix R with R v = reduce(v); its kernel is V."""
        cols = [self.reduce(e) for e in _unit(self.dim)]
        return transpose(cols, self.dim)

    def generators(self) -> List[Vec]:
        return list(self.divisible) + list(self.lattice)

    @cached_property
    def _solver(self) -> CoordinateSolver:
        return CoordinateSolver(self.lattice)

    def lattice_coordinates(self, v) -> Optional[List[Fraction]]:
        """Coordinates of reduce(v) in the lattice basis (None if outside the span)."""
        return self._solver(self.reduce(v))

    def contains(self, v) -> bool:
        r = self.reduce(v)
        if not any(r):
            return True
        c = self._solver(r)
        return c is not None and is_integral(c)

    def contains_subgroup(self, other: "Subgroup") -> bool:
        return self.missing_generator(other) is None

    def escape(self, v) -> Optional[Fraction]:
        """Some t with t·v outside self, or None when Q·v ⊆ self."""
        r = self.reduce(v)
        if not any(r):
            return None
        c = self._solver(r)
        if c is None or not is_integral(c):
            return Fraction(1)
        # t·c is integral only for t in a cyclic subgroup of Q, and 1/(2a) misses it
        a = next(abs(x.numerator) for x in c if x)
        return Fraction(1, 2 * a)

    def missing_generator(self, other: "Subgroup") -> Optional[Vec]:
        """An element of ``other`` outside ``self`` (None if other ⊆ self).

        A divisible direction of ``other`` is returned as a multiple that
        genuinely lies outside ``self``.
        """
        for d in other.divisible:
            t = self.escape(d)
            if t is not None:
                return tuple(t * x for x in d)
        for g in other.lattice:
            if not self.contains(g):
                return g
        return None

    def __add__(self, other: "Subgroup") -> "Subgroup":
        return Subgroup.from_generators(
            self.dim,
            list(self.divisible) + list(other.divisible),
            list(self.lattice) + list(other.lattice),
        )

    def image(self, matrix, target_dim) -> "Subgroup":
        return Subgroup.from_generators(
            target_dim,
            [matvec(matrix, d) for d in self.divisible],
            [matvec(matrix, g) for g in self.lattice],
        )

    def intersect(self, other: "Subgroup") -> "Subgroup":
        return preimage(other.reduction_matrix(), self, list(other.lattice), other.dim)


def _unit(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def preimage(F, source: Subgroup, target_gens, target_dim) -> Subgroup:
    """{w in source : F w in span_Z(target_gens)} as a Subgroup."""
    D = [list(d) for d in source.divisible]
    G = [list(g) for g in source.lattice]
    B = lattice_hnf_basis(target_gens, target_dim)
    m1_cols = [matvec(F, d) for d in D]
    m2_cols = [matvec(F, g) for g in G] + [[-x for x in b] for b in B]
    # F(Da + Gc) = Bz  <=>  M1 a + M2 (c, z) = 0
    if m1_cols and any(any(c) for c in m1_cols):
        K = left_nullspace(transpose(m1_cols, target_dim))
    else:
        K = _unit(target_dim)
    rows = []
    for k in K:
        row = [dot(k, col) for col in m2_cols]
        d = common_denominator(row)
        rows.append([int(x * d) for x in row])
    if m2_cols:
        U = integer_kernel(rows, len(m2_cols)) if rows else _unit_int(len(m2_cols))
    else:
        U = []
    M1 = transpose(m1_cols, target_dim) if m1_cols else [[] for _ in range(target_dim)]
    lattice = []
    for u in U:
        w = [Fraction(0)] * source.dim
        for ci, g in zip(u, G):
            if ci:
                w = [x + ci * y if y else x for x, y in zip(w, g)]
        lattice.append(w)
    if D and U:
        rhs = []
        for u in U:
            b = [Fraction(0)] * target_dim
            for uj, col in zip(u, m2_cols):
                if uj:
                    b = [x - uj * y if y else x for x, y in zip(b, col)]
            rhs.append(b)
        sols = solve_matrix(M1, rhs)
        assert sols is not None, "inconsistent preimage system"
        for w, a in zip(lattice, sols):
            for ai, d in zip(a, D):
                if ai:
                    w[:] = [x + ai * y if y else x for x, y in zip(w, d)]
    divisible = []
    if D:
        for nvec in nullspace(M1, len(D)):
            divisible.append([sum(ni * d[i] for ni, d in zip(nvec, D)) for i in range(source.dim)])
    return Subgroup.from_generators(source.dim, divisible, lattice)


def _unit_int(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def reduce_mod(lattice: Subgroup, v) -> List[Fraction]:
    """Canonical coset representative of v modulo a full-rank lattice.

    The fractional parts of the HNF-basis coordinates, so equal cosets give
    equal vectors.
    """
    c = lattice.lattice_coordinates(v)
    if c is None or lattice.divisible:
        raise InvalidInput("vector is outside the span of the lattice")
    c = [x - math.floor(x) for x in c]
    return [sum((ci * b[i] for ci, b in zip(c, lattice.lattice) if ci), Fraction(0)) for i in range(lattice.dim)]


class Structure(NamedTuple):
    """Abstract shape of W/L: (Q/Z)^divisible_rank ⊕ finite, plus free/Q-rank."""

    divisible_rank: int
    finite: FinAbGroup
    non_torsion_rank: int

    def __str__(self):
        parts = []
        if self.divisible_rank:
            parts.append(f"(Q/Z)^{self.divisible_rank}")
        if self.finite.invariant_factors:
            parts.append(str(self.finite))
        if self.non_torsion_rank:
            parts.append(f"<rank {self.non_torsion_rank} torsion-free>")
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class QZModPresentation:
    """The module carrier/denominator, with denominator a lattice inside carrier."""

    carrier: Subgroup
    denominator: Subgroup
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.carrier.dim != self.denominator.dim:
            raise InvalidInput("carrier and denominator live in different spaces")
        if not self.denominator.is_lattice:
            raise NotPresentable("denominator must be a lattice")
        w = self.carrier.missing_generator(self.denominator)
        if w is not None:
            raise NotInCarrier(f"denominator generator {list(w)} is not in the carrier")

    @classmethod
    def divisible(cls, denominator_basis, dim, name="") -> "QZModPresentation":
        """Q^dim / L."""
        return cls(Subgroup.full(dim), Subgroup.of_lattice(denominator_basis, dim), name)

    @classmethod
    def finite(cls, carrier_basis, denominator_basis, dim, name="") -> "QZModPresentation":
        return cls(
            Subgroup.of_lattice(carrier_basis, dim),
            Subgroup.of_lattice(denominator_basis, dim),
            name,
        )

    @property
    def dim(self) -> int:
        return self.carrier.dim

    def contains(self, v) -> bool:
        return self.carrier.contains(v)

    def is_zero(self, v) -> bool:
        """True iff v represents the identity class."""
        return self.denominator.contains(v)

    def same_class(self, u, v) -> bool:
        return self.is_zero([a - b for a, b in zip(u, v)])

    def is_trivial(self) -> bool:
        return self.carrier == self.denominator

    def is_finite(self) -> bool:
        return self.carrier.is_lattice and self.carrier.lattice_rank == self.denominator.lattice_rank

    def structure(self) -> Structure:
        span_l = Subgroup.from_generators(self.dim, divisible=self.denominator.lattice)
        tors = self.carrier.intersect(span_l)
        lat_l = [tors.reduce(v) for v in self.denominator.lattice]
        lat_l = lattice_hnf_basis(lat_l, self.dim)
        if tors.lattice:
            fin = quotient_group(list(tors.lattice), lat_l)
        else:
            fin = FinAbGroup((), ())
        return Structure(
            tors.divisible_rank,
            fin,
            self.carrier.span_dim - self.denominator.lattice_rank,
        )

    def finite_group(self) -> FinAbGroup:
        if not self.is_finite():
            raise NotPresentable("module is not finite")
        if not self.carrier.lattice:
            return FinAbGroup((), ())
        return quotient_group(list(self.carrier.lattice), list(self.denominator.lattice))

    def order(self):
        return self.finite_group().order if self.is_finite() else INFINITE


def element_order(M: QZModPresentation, v):
    """Smallest k >= 1 with k v in the denominator, or INFINITE."""
    v = frac_vec(v)
    if len(v) != M.dim:
        raise InvalidInput(f"vector has length {len(v)}, module lives in Q^{M.dim}")
    if not M.contains(v):
        raise NotInCarrier(f"{v} is not in the carrier")
    if not any(v):
        return 1
    c = M.denominator.lattice_coordinates(v)
    if c is None:
        return INFINITE
    return common_denominator(c)


@dataclass(frozen=True)
class QZModMorphism:
    source: QZModPresentation
    target: QZModPresentation
    matrix: Tuple[Tuple[Fraction, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        m = tuple(tuple(frac_vec(r)) for r in self.matrix)
        object.__setattr__(self, "matrix", m)
        if len(m) != self.target.dim or any(len(r) != self.source.dim for r in m):
            raise InvalidInput(
                f"matrix must be {self.target.dim}x{self.source.dim}", "matrix"
            )

    def __call__(self, v) -> List[Fraction]:
        return matvec(self.matrix, frac_vec(v))

    def well_defined_witness(self) -> Optional[Vec]:
        """A source generator violating carrier or denominator containment."""
        bad = _source_witness(self, self.source.carrier, self.target.carrier)
        if bad is None:
            bad = _source_witness(self, self.source.denominator, self.target.denominator)
        return bad

    def compose_after(self, first: "QZModMorphism") -> "QZModMorphism":
        """self ∘ first."""
        return QZModMorphism(first.source, self.target, matmul(self.matrix, first.matrix))


def _source_witness(f: QZModMorphism, src: Subgroup, tgt: Subgroup) -> Optional[Vec]:
    # a line lies in V + Λ only if it lies in V
    for d in src.divisible:
        t = tgt.escape(f(d))
        if t is not None:
            return tuple(t * x for x in d)
    for g in src.lattice:
        if not tgt.contains(f(g)):
            return g
    return None


def induced_morphism(src, tgt, matrix, name="") -> QZModMorphism:
    f = QZModMorphism(src, tgt, matrix, name)
    w = f.well_defined_witness()
    if w is not None:
        raise NotWellDefined(f"matrix does not induce a map: witness {list(w)}", list(w))
    return f


def compose(g: QZModMorphism, f: QZModMorphism) -> QZModMorphism:
    if f.target != g.source:
        raise InvalidInput("morphisms are not composable")
    return induced_morphism(f.source, g.target, matmul(g.matrix, f.matrix))


def kernel_subgroup(f: QZModMorphism) -> Subgroup:
    """{w in W_src : f(w) in L_tgt}."""
    return preimage(f.matrix, f.source.carrier, list(f.target.denominator.lattice), f.target.dim)


def image_subgroup(f: QZModMorphism) -> Subgroup:
    """f(W_src) + L_tgt."""
    return f.source.carrier.image(f.matrix, f.target.dim) + f.target.denominator


class KernelCokernel(NamedTuple):
    kernel: QZModPresentation
    inclusion: QZModMorphism
    cokernel: QZModPresentation
    projection: QZModMorphism


def kernel_cokernel(f: QZModMorphism) -> KernelCokernel:
    ker = QZModPresentation(kernel_subgroup(f), f.source.denominator, "ker")
    n = f.source.dim
    inc = induced_morphism(ker, f.source, _unit(n), "ker->src")
    den = image_subgroup(f)
    tgt = f.target
    if den.is_lattice:
        cok = QZModPresentation(tgt.carrier, den, "coker")
        proj = induced_morphism(tgt, cok, _unit(tgt.dim), "tgt->coker")
    else:
        if tgt.carrier.missing_generator(Subgroup.from_generators(tgt.dim, den.divisible)):
            raise NotPresentable("image subspace is not inside the target carrier")
        # re-coordinatise Q^n / V on the non-pivot coordinates of V
        keep = [i for i in range(tgt.dim) if i not in den.pivots]
        R = den.reduction_matrix()
        P = [R[i] for i in keep]
        k = len(keep)
        cok = QZModPresentation(
            tgt.carrier.image(P, k), den.image(P, k), "coker"
        )
        proj = induced_morphism(tgt, cok, P, "tgt->coker")
    return KernelCokernel(ker, inc, cok, proj)


@dataclass
class Junction:
    name: str
    check: str
    passed: bool
    witness: Optional[List[Fraction]] = None
    detail: str = ""

    def to_dict(self):
        return {
            "name": self.name,
            "check": self.check,
            "passed": self.passed,
            "witness": None if self.witness is None else [Fraction(x) for x in self.witness],
            "detail": self.detail,
        }


def check(name: str, kind: str, ok: bool, witness, detail: str = "") -> Junction:
    """Junction that keeps ``witness`` (a vector) only when the check fails."""
    return Junction(name, kind, ok, None if ok else [Fraction(x) for x in witness], detail)


@dataclass
class ExactnessReport:
    name: str
    junctions: List[Junction]

    @property
    def passed(self) -> bool:
        return all(j.passed for j in self.junctions)

    @property
    def failures(self) -> List[Junction]:
        return [j for j in self.junctions if not j.passed]

    @property
    def witness(self):
        for j in self.junctions:
            if not j.passed:
                return j.witness
        return None

    def to_dict(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "junctions": [j.to_dict() for j in self.junctions],
        }

    def __str__(self):
        lines = [f"{self.name}: {'PASS' if self.passed else 'FAIL'}"]
        for j in self.junctions:
            mark = "ok" if j.passed else "FAIL"
            extra = "" if j.witness is None else f" witness={[str(x) for x in j.witness]}"
            lines.append(f"  [{mark}] {j.name} {j.check}{extra}")
        return "\n".join(lines)


def _label(f: QZModMorphism, i: int) -> str:
    return f.name or f"f{i}"


def _compare(name, kind, kernel: Subgroup, image: Subgroup) -> Junction:
    w = image.missing_generator(kernel)
    if w is not None:
        return Junction(name, kind, False, list(w), "kernel element outside the image")
    w = kernel.missing_generator(image)
    if w is not None:
        return Junction(name, kind, False, list(w), "image element outside the kernel")
    detail = ""
    if kernel.is_lattice and image.is_lattice:
        detail = "index 1"
    return Junction(name, kind, True, None, detail)


def verify_exact(seq: Sequence[QZModMorphism], short: bool = False, name: str = "") -> ExactnessReport:
    """Check exactness at every interior object of ``seq``.

    With ``short=True`` the sequence is read as 0 -> M0 -> ... -> Mk -> 0
    and the two end maps are also checked for injectivity/surjectivity.
    """
    junctions: List[Junction] = []
    for i, f in enumerate(seq):
        w = f.well_defined_witness()
        junctions.append(
            Junction(_label(f, i), "well-defined", w is None, None if w is None else list(w))
        )
    for i in range(len(seq) - 1):
        f, g = seq[i], seq[i + 1]
        label = f"{_label(f, i)}|{_label(g, i + 1)}"
        if f.target.dim != g.source.dim:
            raise InvalidInput(f"{label}: target Q^{f.target.dim} does not meet source Q^{g.source.dim}")
        gf = matmul(g.matrix, f.matrix)
        bad = None
        den = g.target.denominator
        for d in f.source.carrier.divisible:
            t = den.escape(matvec(gf, d))
            if t is not None:
                bad = tuple(t * x for x in d)
                break
        if bad is None:
            for x in f.source.carrier.lattice:
                if not g.target.denominator.contains(matvec(gf, x)):
                    bad = x
                    break
        junctions.append(
            Junction(label, "composition-zero", bad is None, None if bad is None else list(bad))
        )
        junctions.append(_compare(label, "kernel=image", kernel_subgroup(g), image_subgroup(f)))
    if short and seq:
        f = seq[0]
        ker = kernel_subgroup(f)
        w = f.source.denominator.missing_generator(ker)
        junctions.append(
            Junction(f"0|{_label(f, 0)}", "injective", w is None, None if w is None else list(w))
        )
        g = seq[-1]
        img = image_subgroup(g)
        w = img.missing_generator(g.target.carrier)
        junctions.append(
            Junction(f"{_label(g, len(seq) - 1)}|0", "surjective", w is None, None if w is None else list(w))
        )
    return ExactnessReport(name, junctions)
