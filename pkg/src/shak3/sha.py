"""ζ_h : NS*/NS -> Z/m and the group Ш(S, h) = SBr°/ker ζ_h.

Ш is presented as (T ⊗ Q)/T~ in T-coordinates, where T~ is T enlarged by
the transport of ker ζ_h.  It surjects onto Br = (T ⊗ Q)/T' with kernel the
image of ζ_h (all of Z/m when h is primitive).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Optional, Tuple

from .brauer import decompose
from .errors import ImprimitiveClass, InvalidInput, NoPreimage
from .k3 import K3Surface
from .lattice import FinAbGroup, IntLattice, discriminant_group, divisibility, dual_lattice, quotient_group
from .linalg import content, frac_vec, matvec
from .normal_forms import solve_integer
from .qzmod import (
    ExactnessReport,
    QZModMorphism,
    QZModPresentation,
    Subgroup,
    check,
    element_order,
    induced_morphism,
    kernel_cokernel,
    preimage,
    reduce_mod,
    verify_exact,
)


def _unit(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class ZetaMap:
    m: int
    values: Tuple[int, ...]  # ζ on the generator lifts of NS*/NS, reduced mod m
    A: FinAbGroup
    kernel: FinAbGroup
    kernel_lattice: Tuple[Tuple[Fraction, ...], ...]  # {c in NS* : (c.h) in mZ}, NS-coordinates
    image_generator: int  # image of ζ is image_generator·Z/mZ
    pairing_generator: int  # (NS*.h) = pairing_generator·Z
    pairing_witness: Tuple[Fraction, ...]  # c in NS* with (c.h) = pairing_generator
    well_defined: bool

    @property
    def image_order(self) -> int:
        return self.m // self.image_generator

    @property
    def surjective(self) -> bool:
        return self.image_generator == 1


def zeta_map(ns: IntLattice, h) -> ZetaMap:
    m = divisibility(ns, h)
    h = [int(x) for x in h]
    cov = matvec(ns.matrix(), h)
    well_defined = all(x % m == 0 for x in cov)
    A = discriminant_group(ns)
    values = tuple(int(sum(c * x for c, x in zip(lift, cov))) % m for lift in A.generator_lifts)
    dual = dual_lattice(ns)
    pair = [sum(b * x for b, x in zip(v, cov)) for v in dual]  # integers since v in NS*
    g = content(pair)
    coeffs = solve_integer([[int(p) for p in pair]], [g])
    witness = tuple(
        sum((k * v[i] for k, v in zip(coeffs, dual)), Fraction(0)) for i in range(ns.rank)
    )
    n = ns.rank
    K = preimage([cov], Subgroup.of_lattice(dual, n), [[m]], 1)
    kernel = quotient_group(list(K.lattice), _unit(n))
    return ZetaMap(
        m=m,
        values=values,
        A=A,
        kernel=kernel,
        kernel_lattice=K.lattice,
        image_generator=gcd(g, m),
        pairing_generator=g,
        pairing_witness=witness,
        well_defined=well_defined,
    )


@dataclass(frozen=True, eq=False)
class ShaGroup:
    surface: K3Surface
    h: Tuple[int, ...]
    m: int
    zeta: ZetaMap
    T_tilde: Optional[Subgroup]
    presentation: Optional[QZModPresentation]
    br: Optional[QZModPresentation]
    generator: Optional[Tuple[Fraction, ...]]  # transport of the ζ-witness, T-coordinates
    kernel_copy: Optional[QZModMorphism]
    to_br: Optional[QZModMorphism]

    @property
    def ker_zeta(self) -> FinAbGroup:
        return self.zeta.kernel

    @property
    def abstract(self) -> bool:
        return self.presentation is None

    @property
    def kernel_order(self) -> int:
        """Order of ker(Ш -> Br), the image of ζ_h."""
        return self.zeta.image_order

    def structure(self) -> str:
        k = self.kernel_order
        return "Br" if k == 1 else f"extension of Br by Z/{k}"

    def require_presentation(self):
        if self.presentation is None:
            raise InvalidInput("Ш elements need an embedding of NS", "embedding")

    def index(self) -> int:
        """[T~ : T]."""
        self.require_presentation()
        if not self.T_tilde.lattice:
            return 1
        return quotient_group(list(self.T_tilde.lattice), _unit(self.surface.t_rank)).order


def sha_group(surface: K3Surface, h, allow_imprimitive: bool = False) -> ShaGroup:
    ns = surface.ns
    if len(h) != ns.rank:
        raise InvalidInput(f"class has length {len(h)}, NS has rank {ns.rank}", "h")
    zeta = zeta_map(ns, h)  # raises ZeroClass
    h = tuple(int(x) for x in h)
    if content(h) != 1 and not allow_imprimitive:
        raise ImprimitiveClass(f"h has content {content(h)}; pass allow_imprimitive to proceed")
    if not surface.has_embedding:
        return ShaGroup(surface, h, zeta.m, zeta, None, None, None, None, None, None)
    r = surface.t_rank
    moved = [surface.transport(c) for c in zeta.kernel_lattice]
    T_tilde = Subgroup.of_lattice(_unit(r) + moved, r)
    sha = QZModPresentation(Subgroup.full(r), T_tilde, "Ш")
    br = QZModPresentation(Subgroup.full(r), surface.Tprime, "Br")
    t1 = tuple(surface.transport(zeta.pairing_witness))
    k = zeta.image_order
    # Z/k -> Ш, 1/k -> ξ(transport(c1)) where ζ(c1) generates the image
    cyc = QZModPresentation.finite([[Fraction(1, k)]], [[1]], 1, f"Z/{k}")
    kernel_copy = induced_morphism(cyc, sha, [[k * x] for x in t1], "Z/m->Ш")
    to_br = induced_morphism(sha, br, _unit(r), "Ш->Br")
    return ShaGroup(surface, h, zeta.m, zeta, T_tilde, sha, br, t1, kernel_copy, to_br)


def xi(sha: ShaGroup, alpha0) -> List[Fraction]:
    """SBr° -> Ш: the canonical representative of alpha0 modulo T~."""
    sha.require_presentation()
    return reduce_mod(sha.T_tilde, frac_vec(alpha0))


def same_twist(sha: ShaGroup, a1, a2) -> bool:
    sha.require_presentation()
    return sha.T_tilde.contains([x - y for x, y in zip(frac_vec(a1), frac_vec(a2))])


def sha_product(sha: ShaGroup, x, y) -> List[Fraction]:
    return xi(sha, [a + b for a, b in zip(frac_vec(x), frac_vec(y))])


def sha_inverse(sha: ShaGroup, x) -> List[Fraction]:
    return xi(sha, [-a for a in frac_vec(x)])


def sha_identity(sha: ShaGroup) -> List[Fraction]:
    return [Fraction(0)] * sha.surface.t_rank


def sha_order(sha: ShaGroup, x) -> int:
    sha.require_presentation()
    return element_order(sha.presentation, x)


def degree_class(sha: ShaGroup, d: int) -> List[Fraction]:
    """ξ_h(transport(a)) for any a in NS*/NS with ζ_h(a) = d mod m."""
    sha.require_presentation()
    d = int(d)
    z = sha.zeta
    g0 = z.image_generator
    if d % g0:
        raise NoPreimage(f"{d} mod {sha.m} is not in the image of ζ_h (generated by {g0})")
    # solve k·pairing_generator ≡ d (mod m)
    mod = sha.m // g0
    k = (d // g0) * pow(z.pairing_generator // g0, -1, mod) if mod > 1 else 0
    return xi(sha, [k * x for x in sha.generator])


def normalize_twist(sha: ShaGroup, alpha, i: int) -> List[Fraction]:
    sha.require_presentation()
    a0 = decompose(sha.surface, alpha).alpha0
    base = xi(sha, a0)
    return sha_product(sha, base, [-x for x in degree_class(sha, i)])


def diagram_checks(sha: ShaGroup) -> ExactnessReport:
    """The extension 0 -> Z/m -> Ш -> Br -> 0 and the square relating ζ_h and ξ_h."""
    sha.require_presentation()
    z = sha.zeta
    rep = verify_exact([sha.kernel_copy, sha.to_br], short=True, name="Z/m->Ш->Br")
    junctions = list(rep.junctions)
    cov = matvec(sha.surface.ns.matrix(), list(sha.h))
    bad_ns = next((e for e, x in zip(_unit(len(cov)), cov) if x % sha.m), [])
    junctions.append(check("zeta", "well-defined on NS", z.well_defined, bad_ns))
    a_lift = z.A.generator_lifts[0] if z.A.generator_lifts else []
    junctions.append(
        check(
            "zeta", "|ker|·|im| = |A|", z.kernel.order * z.image_order == z.A.order, a_lift,
            f"{z.kernel.order}·{z.image_order} vs {z.A.order}",
        )
    )
    idx = sha.index()
    t_gen = sha.T_tilde.lattice[0] if sha.T_tilde.lattice else []
    junctions.append(check("T~", "[T~:T] = |ker ζ|", idx == z.kernel.order, t_gen, f"{idx} vs {z.kernel.order}"))
    between = sha.T_tilde.missing_generator(sha.surface.t_lattice()) or sha.surface.Tprime.missing_generator(sha.T_tilde)
    junctions.append(check("T~", "T ⊆ T~ ⊆ T'", between is None, between))
    k = kernel_cokernel(sha.to_br).kernel
    fin = k.finite_group().invariant_factors if k.is_finite() else None
    expect = () if sha.kernel_order == 1 else (sha.kernel_order,)
    junctions.append(check("Ш->Br", "kernel cyclic of order m", fin == expect, sha.generator, f"{fin}"))
    # lower-left square: ξ(transport(c)) = κ(ζ(c)) on generator lifts of A
    bad = None
    for lift, val in zip(z.A.generator_lifts, z.values):
        lhs = xi(sha, sha.surface.transport(lift))
        if lhs != degree_class(sha, val):
            bad = lift
            break
    junctions.append(check("square", "ξ∘transport = κ∘ζ on A", bad is None, bad))
    if sha.m == 1:
        w = sha.T_tilde.missing_generator(sha.surface.Tprime) or sha.surface.Tprime.missing_generator(sha.T_tilde)
        junctions.append(check("m=1", "T~ = T'", w is None, w))
    return ExactnessReport("sha", junctions)
