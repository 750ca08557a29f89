"""Special, restricted special and ordinary Brauer groups as lattice pairs.

SBr = (Λ ⊗ Q)/Λ in Λ-coordinates, SBr° = (T ⊗ Q)/T and Br = (T ⊗ Q)/T'
in T-coordinates, NS ⊗ Q/Z in NS-coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from .errors import InvalidInput
from .k3 import K3_RANK, K3Surface
from .lattice import FinAbGroup, IntLattice, divisibility, dual_lattice, quotient_group
from .linalg import common_denominator, frac_vec, is_integral, matvec, nullspace, transpose
from .qzmod import (
    ExactnessReport,
    QZModMorphism,
    QZModPresentation,
    Subgroup,
    element_order,
    induced_morphism,
    preimage,
    reduce_mod,
    verify_exact,
)


def _unit(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class BrauerPresentations:
    sbr: QZModPresentation
    sbro: QZModPresentation
    br: QZModPresentation
    a: QZModPresentation
    ns_qz: QZModPresentation
    ns_to_sbr: QZModMorphism
    sbr_to_br: QZModMorphism
    a_to_sbro: QZModMorphism
    sbro_to_br: QZModMorphism

    def sequences(self) -> Dict[str, List[QZModMorphism]]:
        return {
            "NS⊗Q/Z->SBr->Br": [self.ns_to_sbr, self.sbr_to_br],
            "A->SBr°->Br": [self.a_to_sbro, self.sbro_to_br],
        }

    def verify(self) -> ExactnessReport:
        junctions = []
        for name, seq in self.sequences().items():
            rep = verify_exact(seq, short=True, name=name)
            for j in rep.junctions:
                j.name = f"{name}:{j.name}"
            junctions.extend(rep.junctions)
        return ExactnessReport("brauer", junctions)


def brauer_presentations(surface: K3Surface) -> BrauerPresentations:
    surface.require_embedding()
    rho, r = surface.rho, surface.t_rank
    sbr = QZModPresentation.divisible(_unit(K3_RANK), K3_RANK, "SBr")
    sbro = QZModPresentation.divisible(_unit(r), r, "SBr°")
    br = QZModPresentation(Subgroup.full(r), surface.Tprime, "Br")
    a = QZModPresentation(surface.Tprime, surface.t_lattice(), "A")
    ns_qz = QZModPresentation.divisible(_unit(rho), rho, "NS⊗Q/Z")
    return BrauerPresentations(
        sbr=sbr,
        sbro=sbro,
        br=br,
        a=a,
        ns_qz=ns_qz,
        ns_to_sbr=induced_morphism(ns_qz, sbr, transpose(surface.embedding), "NS⊗Q/Z->SBr"),
        sbr_to_br=induced_morphism(sbr, br, surface.proj_T, "SBr->Br"),
        a_to_sbro=induced_morphism(a, sbro, _unit(r), "A->SBr°"),
        sbro_to_br=induced_morphism(sbro, br, _unit(r), "SBr°->Br"),
    )


def _kernel_carrier(ns: IntLattice, h) -> Subgroup:
    """{v in NS ⊗ Q : (v.h) in Z}."""
    divisibility(ns, h)  # validates h; raises ZeroClass
    cov = matvec(ns.matrix(), [int(x) for x in h])
    return preimage([cov], Subgroup.full(ns.rank), [[1]], 1)


@dataclass(frozen=True)
class KerRestriction:
    """ker(NS ⊗ Q/Z -> Q/Z, v -> (v.h)) and its relation to h^perp ⊗ Q/Z."""

    ns: IntLattice
    h: Tuple[int, ...]
    presentation: QZModPresentation
    perp: Subgroup
    m: int
    quotient: FinAbGroup
    contains_perp: bool

    @property
    def quotient_is_cyclic_of_order_m(self) -> bool:
        return len(self.quotient.invariant_factors) <= 1 and self.quotient.order == self.m

    def monotone(self, k: int = 2) -> bool:
        """ker(r_h) ⊆ ker(r_{kh})."""
        bigger = _kernel_carrier(self.ns, [k * x for x in self.h])
        return bigger.contains_subgroup(self.presentation.carrier)


def ker_restriction(ns: IntLattice, h) -> KerRestriction:
    ns.require_nondegenerate()
    m = divisibility(ns, h)
    h = tuple(int(x) for x in h)
    n = ns.rank
    carrier = _kernel_carrier(ns, h)
    cov = matvec(ns.matrix(), list(h))
    perp = Subgroup.from_generators(n, nullspace([cov], n), _unit(n))
    contains = carrier.contains_subgroup(perp)
    # both share the subspace h^perp, so their reduced lattices are comparable
    quotient = quotient_group(list(carrier.lattice), list(perp.lattice))
    pres = QZModPresentation(carrier, Subgroup.of_lattice(_unit(n), n), "ker(r_h)")
    return KerRestriction(ns, h, pres, perp, m, quotient, contains)


def restricted_core(ns: IntLattice) -> QZModPresentation:
    """Intersection of ker(r_x) over a basis x of NS."""
    ns.require_nondegenerate()
    n = ns.rank
    carrier = Subgroup.full(n)
    for i in range(n):
        e = [int(i == j) for j in range(n)]
        cov = matvec(ns.matrix(), e)
        if not any(cov):
            continue
        carrier = carrier.intersect(preimage([cov], Subgroup.full(n), [[1]], 1))
    return QZModPresentation(carrier, Subgroup.of_lattice(_unit(n), n), "core")


def restricted_core_matches_dual(ns: IntLattice) -> bool:
    return restricted_core(ns).carrier == Subgroup.of_lattice(dual_lattice(ns), ns.rank)


@dataclass(frozen=True)
class SpecialBrauerClass:
    """A class in (Λ ⊗ Q)/Λ, given by a rational 22-vector."""

    vector: Tuple[Fraction, ...]

    def __post_init__(self):
        v = tuple(frac_vec(self.vector))
        if len(v) != K3_RANK:
            raise InvalidInput(f"class has {len(v)} entries, expected 22", "alpha")
        object.__setattr__(self, "vector", v)

    @classmethod
    def from_fraction(cls, num, den) -> "SpecialBrauerClass":
        if int(den) < 1:
            raise InvalidInput("denominator must be positive", "alpha.den")
        return cls(tuple(Fraction(int(x), int(den)) for x in num))

    def __add__(self, other: "SpecialBrauerClass") -> "SpecialBrauerClass":
        return SpecialBrauerClass(tuple(a + b for a, b in zip(self.vector, other.vector)))


def class_order(alpha) -> int:
    v = alpha.vector if isinstance(alpha, SpecialBrauerClass) else frac_vec(alpha)
    return common_denominator(v)


@dataclass(frozen=True)
class Decomposition:
    alpha0: Tuple[Fraction, ...]  # T-coordinates, reduced mod T
    alpha1: Tuple[Fraction, ...]  # NS-coordinates, reduced mod NS
    in_sbro: bool
    ns_part: Tuple[Fraction, ...]  # Λ-coordinates, unreduced
    t_part: Tuple[Fraction, ...]


def decompose(surface: K3Surface, alpha) -> Decomposition:
    surface.require_embedding()
    if not isinstance(alpha, SpecialBrauerClass):
        alpha = SpecialBrauerClass(alpha)
    v = list(alpha.vector)
    c = surface.project_NS(v)
    z = surface.project_T(v)
    in_sbro = is_integral(matvec(surface.ns.matrix(), c))
    r, rho = surface.t_rank, surface.rho
    a0 = reduce_mod(Subgroup.of_lattice(_unit(r), r), z) if r else []
    a1 = reduce_mod(Subgroup.of_lattice(_unit(rho), rho), c)
    return Decomposition(
        tuple(a0), tuple(a1), in_sbro, tuple(surface.ns_vector(c)), tuple(surface.t_vector(z))
    )


def sbro_order(surface: K3Surface, z) -> int:
    r = surface.t_rank
    return element_order(QZModPresentation.divisible(_unit(r), r), z)
