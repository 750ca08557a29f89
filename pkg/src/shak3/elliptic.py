"""Elliptic fibrations: fibre divisibility and the twist of T(S0) by β.

Brauer groups on the Jacobian side are presented on dual lattices,
Hom(T, Q/Z) = (T* ⊗ Q)/T*, in covector coordinates, so the restriction
along T_β ⊆ T0 is the matrix whose rows are the T_β basis vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import InvalidInput, NotIsotropic
from .k3 import K3Surface
from .lattice import IntLattice, discriminant_group, divisibility, quotient_group
from .linalg import common_denominator, frac_vec, matmul, transpose
from .qzmod import (
    ExactnessReport,
    check,
    QZModPresentation,
    Subgroup,
    element_order,
    induced_morphism,
    kernel_cokernel,
    preimage,
    verify_exact,
)
from .sha import ShaGroup, sha_group


def _unit(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


@dataclass(frozen=True, eq=False)
class FibreCheck:
    m: int
    sha: ShaGroup
    section_isomorphism: Optional[bool]  # m = 1 and T~ = T'; None without embedding

    @property
    def structure(self) -> str:
        return self.sha.structure()


def fibre_check(surface, f, allow_imprimitive: bool = False) -> FibreCheck:
    if isinstance(surface, IntLattice):
        surface = K3Surface(surface)
    ns = surface.ns
    f = [int(x) for x in f]
    if len(f) != ns.rank:
        raise InvalidInput(f"fibre class has length {len(f)}, NS has rank {ns.rank}", "f")
    if ns.pair(f, f) != 0:
        raise NotIsotropic(f"(f.f) = {ns.pair(f, f)}")
    m = divisibility(ns, f)
    sha = sha_group(surface, f, allow_imprimitive=allow_imprimitive)
    iso = None
    if surface.has_embedding:
        iso = m == 1 and sha.T_tilde == surface.Tprime
    return FibreCheck(m, sha, iso)


def _beta(T0: IntLattice, beta) -> list:
    beta = frac_vec(beta)
    if len(beta) != T0.rank:
        raise InvalidInput(f"beta has length {len(beta)}, T0 has rank {T0.rank}", "beta")
    return beta


def beta_order(beta) -> int:
    return common_denominator(beta)


@dataclass(frozen=True)
class TwistedLattice:
    lattice: IntLattice  # basis in T0-coordinates
    index: int


def twist_transcendental(T0: IntLattice, beta) -> TwistedLattice:
    """T_β = {t in T0 : β(t) in Z} and [T0 : T_β]."""
    T0.require_nondegenerate()
    beta = _beta(T0, beta)
    k = T0.rank
    sub = preimage([beta], Subgroup.of_lattice(_unit(k), k), [[1]], 1)
    basis = [[int(x) for x in v] for v in sub.lattice]
    gram = matmul(matmul(basis, T0.matrix()), transpose(basis))
    index = quotient_group(_unit(k), basis).order
    return TwistedLattice(IntLattice(gram, basis), index)


def jacobian_sequence_check(T0: IntLattice, beta, T_S: Optional[IntLattice] = None) -> ExactnessReport:
    """0 -> <β> -> Br(S0) -> Br(S) -> 0 with <β> cyclic of order |β|."""
    beta = _beta(T0, beta)
    n = beta_order(beta)
    tw = twist_transcendental(T0, beta)
    k = T0.rank
    br0 = QZModPresentation.divisible(_unit(k), k, "Br(S0)")
    br = QZModPresentation.divisible(_unit(k), k, "Br(S)")
    restrict = induced_morphism(br0, br, tw.lattice.basis, "Br(S0)->Br(S)")
    cyc = QZModPresentation.finite([[Fraction(1, n)]], [[1]], 1, "<β>")
    incl = induced_morphism(cyc, br0, [[n * b] for b in beta], "<β>->Br(S0)")
    rep = verify_exact([incl, restrict], short=True, name="jacobian")
    junctions = list(rep.junctions)
    junctions.append(check("T_β", "[T0:T_β] = |β|", tw.index == n, beta, f"{tw.index} vs {n}"))
    ker = kernel_cokernel(restrict).kernel
    fin = ker.finite_group().invariant_factors if ker.is_finite() else None
    expect = () if n == 1 else (n,)
    junctions.append(check("kernel", f"cyclic of order {n}", fin == expect, beta, f"{fin}"))
    gen_ok = ker.contains(beta) and element_order(br0, beta) == n
    junctions.append(check("kernel", "generated by β", gen_ok, beta))
    if T_S is not None:
        T_S.require_nondegenerate()
        mine = tw.lattice
        checks = [
            ("rank", mine.rank == T_S.rank, f"{mine.rank} vs {T_S.rank}"),
            ("|det|", abs(mine.det) == abs(T_S.det), f"{mine.det} vs {T_S.det}"),
            (
                "discriminant group",
                discriminant_group(mine).invariant_factors == discriminant_group(T_S).invariant_factors,
                f"{discriminant_group(mine)} vs {discriminant_group(T_S)}",
            ),
        ]
        for what, ok, detail in checks:
            junctions.append(check("T(S)", what, ok, mine.basis[0] if mine.basis else beta, detail))
    return ExactnessReport("jacobian", junctions)
