"""K3 lattice data: Λ = U^3 ⊕ E8(-1)^2, T = NS^⊥, T' = Λ/NS, A = T'/T.

Coordinates used throughout:

* Λ-coordinates: the standard basis of Λ (22 entries);
* NS-coordinates: the given basis of NS (ρ entries);
* T-coordinates: the HNF basis of T = NS^⊥ (r = 22 - ρ entries).

T' is realised inside T ⊗ Q (T-coordinates) as the orthogonal projection
of Λ; the unimodularity of Λ makes it equal to T*.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from .errors import InvalidInput, NoPreimage, NotPrimitive
from .lattice import (
    FinAbGroup,
    IntLattice,
    discriminant_group,
    dual_lattice,
    orthogonal_complement,
    primitivity,
    quotient_group,
)
from .linalg import frac_vec, inverse, is_integral, matmul, matvec, transpose
from .normal_forms import solve_integer
from .qzmod import (
    ExactnessReport,
    Junction,
    QZModPresentation,
    Subgroup,
    check,
    induced_morphism,
    reduce_mod,
    verify_exact,
)

K3_RANK = 22

_E8_EDGES = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)]


def e8_cartan() -> List[List[int]]:
    """Positive definite even unimodular E8 (Cartan matrix)."""
    g = [[2 if i == j else 0 for j in range(8)] for i in range(8)]
    for i, j in _E8_EDGES:
        g[i][j] = g[j][i] = -1
    return g


def k3_gram() -> IntLattice:
    """U ⊕ U ⊕ U ⊕ E8(-1) ⊕ E8(-1)."""
    g = [[0] * K3_RANK for _ in range(K3_RANK)]
    for b in range(3):
        g[2 * b][2 * b + 1] = g[2 * b + 1][2 * b] = 1
    e8 = e8_cartan()
    for off in (6, 14):
        for i in range(8):
            for j in range(8):
                g[off + i][off + j] = -e8[i][j]
    return IntLattice(g)


_LAMBDA = k3_gram()


def lam() -> IntLattice:
    return _LAMBDA


def _unit(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


@dataclass(frozen=True, eq=False)
class K3Surface:
    """NS(S) with an optional primitive embedding into Λ.

    Without an embedding only NS-side quantities are available.  With one,
    T, T', A and the projections are computed eagerly.
    """

    ns: IntLattice
    embedding: Optional[tuple] = None
    T: Optional[IntLattice] = field(default=None, init=False)
    proj_T: Optional[list] = field(default=None, init=False, repr=False)
    proj_NS: Optional[list] = field(default=None, init=False, repr=False)
    Tprime: Optional[Subgroup] = field(default=None, init=False, repr=False)
    A: Optional[FinAbGroup] = field(default=None, init=False)

    def __post_init__(self):
        if self.embedding is None:
            self.ns.require_nondegenerate()
            return
        emb = tuple(tuple(int(x) if Fraction(x).denominator == 1 else Fraction(x) for x in v) for v in self.embedding)
        object.__setattr__(self, "embedding", emb)
        if len(emb) != self.ns.rank:
            raise InvalidInput(
                f"embedding has {len(emb)} rows, NS has rank {self.ns.rank}", "embedding"
            )
        for i, v in enumerate(emb):
            if len(v) != K3_RANK:
                raise InvalidInput(f"row {i} has {len(v)} entries, expected 22", "embedding")
            if not is_integral(v):
                raise InvalidInput(f"row {i} is not integral", "embedding")
        L = _LAMBDA
        for i, u in enumerate(emb):
            for j, v in enumerate(emb):
                if L.pair(u, v) != self.ns.gram[i][j]:
                    raise InvalidInput(
                        f"embedding is not isometric: (row{i}.row{j}) = {L.pair(u, v)}, "
                        f"gram says {self.ns.gram[i][j]}",
                        "embedding",
                    )
        sub = IntLattice(self.ns.gram, emb)
        ok, _ = primitivity(sub, L)
        if not ok:
            raise NotPrimitive("NS is not primitive in the K3 lattice")
        self.ns.require_nondegenerate()
        T = orthogonal_complement(sub, L)
        object.__setattr__(self, "T", T)
        Q = L.matrix()
        bt_q = [matvec(Q, t) for t in T.basis]  # rows x -> (t_i.x)
        e_q = [matvec(Q, e) for e in emb]
        proj_T = matmul(inverse(T.matrix()), bt_q) if T.rank else []
        proj_NS = matmul(inverse(self.ns.matrix()), e_q)
        object.__setattr__(self, "proj_T", proj_T)
        object.__setattr__(self, "proj_NS", proj_NS)
        r = T.rank
        images = transpose(proj_T, K3_RANK) if r else []
        object.__setattr__(self, "Tprime", Subgroup.of_lattice(images, r))
        A = quotient_group(list(self.Tprime.lattice), _unit(r)) if r else FinAbGroup((), ())
        object.__setattr__(self, "A", A)

    @property
    def has_embedding(self) -> bool:
        return self.embedding is not None

    @property
    def rho(self) -> int:
        return self.ns.rank

    @property
    def t_rank(self) -> int:
        return K3_RANK - self.ns.rank

    def require_embedding(self):
        if self.embedding is None:
            raise InvalidInput("this operation needs an embedding of NS into the K3 lattice", "embedding")

    def ns_vector(self, c) -> List[Fraction]:
        """NS-coordinates -> Λ-coordinates."""
        self.require_embedding()
        c = frac_vec(c)
        return [sum((ci * e[k] for ci, e in zip(c, self.embedding)), Fraction(0)) for k in range(K3_RANK)]

    def t_vector(self, z) -> List[Fraction]:
        """T-coordinates -> Λ-coordinates."""
        self.require_embedding()
        z = frac_vec(z)
        return [sum((zi * t[k] for zi, t in zip(z, self.T.basis)), Fraction(0)) for k in range(K3_RANK)]

    def project_T(self, v) -> List[Fraction]:
        self.require_embedding()
        return matvec(self.proj_T, frac_vec(v))

    def project_NS(self, v) -> List[Fraction]:
        self.require_embedding()
        return matvec(self.proj_NS, frac_vec(v))

    def t_lattice(self) -> Subgroup:
        return Subgroup.of_lattice(_unit(self.t_rank), self.t_rank)

    def t_dual(self) -> Subgroup:
        return Subgroup.of_lattice(dual_lattice(self.T), self.t_rank)

    def integral_lift(self, phi) -> List[int]:
        """x in Λ with (x.n_j) = (phi.n_j) for all NS basis vectors n_j.

        ``phi`` is in NS-coordinates and must lie in NS*.
        """
        self.require_embedding()
        targets = matvec(self.ns.matrix(), frac_vec(phi))
        if not is_integral(targets):
            raise NoPreimage("class is not in NS*; no integral lift exists")
        rows = [matvec(_LAMBDA.matrix(), e) for e in self.embedding]
        x = solve_integer(rows, [int(t) for t in targets])
        if x is None:
            raise NoPreimage("no integral lift; embedding cannot be primitive")
        return x

    def transport(self, phi) -> List[Fraction]:
        """NS*/NS -> T'/T: the class of phi as an element of T ⊗ Q/Z.

        phi (as a class in NS ⊗ Q ⊂ Λ ⊗ Q) differs from its integral lift x
        by a vector of T ⊗ Q; that vector, in T-coordinates, is returned.
        """
        x = self.integral_lift(phi)
        return [-c for c in self.project_T(x)]


def hodge_decomposition(surface: K3Surface):
    """(T, T' basis in T-coordinates, A = T'/T)."""
    surface.require_embedding()
    return surface.T, [list(v) for v in surface.Tprime.lattice], surface.A


def ns_dual_basis(surface: K3Surface) -> list:
    return dual_lattice(surface.ns)


def _att_sequence(s: K3Surface):
    r = s.t_rank
    A = QZModPresentation(s.Tprime, s.t_lattice(), "A")
    sbro = QZModPresentation.divisible(_unit(r), r, "T⊗Q/Z")
    br = QZModPresentation(Subgroup.full(r), s.Tprime, "T'⊗Q/Z")
    inc = induced_morphism(A, sbro, _unit(r), "A->T⊗Q/Z")
    proj = induced_morphism(sbro, br, _unit(r), "T⊗Q/Z->T'⊗Q/Z")
    return [inc, proj]


def _nst_sequence(s: K3Surface):
    rho, r = s.rho, s.t_rank
    ns = QZModPresentation(Subgroup.of_lattice(_unit(rho), rho), Subgroup.zero(rho), "NS")
    lam_ = QZModPresentation(Subgroup.of_lattice(_unit(K3_RANK), K3_RANK), Subgroup.zero(K3_RANK), "Λ")
    tp = QZModPresentation(s.Tprime, Subgroup.zero(r), "T'")
    emb = induced_morphism(ns, lam_, transpose(s.embedding), "NS->Λ")
    proj = induced_morphism(lam_, tp, s.proj_T, "Λ->T'")
    return [emb, proj]


def four_term_maps(s: K3Surface):
    """0 -> NS -> NS* -> T⊗Q/Z -> T*⊗Q/Z -> 0 (the middle map via integral lifts)."""
    rho, r = s.rho, s.t_rank
    ns = QZModPresentation(Subgroup.of_lattice(_unit(rho), rho), Subgroup.zero(rho), "NS")
    dual_basis = ns_dual_basis(s)
    nsd = QZModPresentation(Subgroup.of_lattice(dual_basis, rho), Subgroup.zero(rho), "NS*")
    tqz = QZModPresentation.divisible(_unit(r), r, "T⊗Q/Z")
    tdqz = QZModPresentation(Subgroup.full(r), s.t_dual(), "T*⊗Q/Z")
    # phi -> T-projection of an integral lift, extended Q-linearly from the NS* basis
    images = [s.project_T(s.integral_lift(b)) for b in dual_basis]
    C = transpose(dual_basis, rho)
    M = matmul(transpose(images, r), inverse(C))
    f1 = induced_morphism(ns, nsd, _unit(rho), "NS->NS*")
    f2 = induced_morphism(nsd, tqz, M, "NS*->T⊗Q/Z")
    f3 = induced_morphism(tqz, tdqz, _unit(r), "T⊗Q/Z->T*⊗Q/Z")
    return [f1, f2, f3]


def tprime_equals_tdual(s: K3Surface) -> Junction:
    tp, td = s.Tprime, s.t_dual()
    w = tp.missing_generator(td) or td.missing_generator(tp)
    return check("T'=T*", "hnf-equality", w is None, w)


def transport_well_defined(s: K3Surface) -> Junction:
    """Shifting phi by NS (or changing the lift) moves transport(phi) inside T."""
    T = s.t_lattice()
    for b in ns_dual_basis(s):
        base = s.transport(b)
        for j in range(s.rho):
            shifted = list(b)
            shifted[j] += 1
            diff = [x - y for x, y in zip(s.transport(shifted), base)]
            if not T.contains(diff):
                return check("transport", "well-defined mod T", False, b)
    return check("transport", "well-defined mod T", True, None)


def hodge_sequence_suite(surface: K3Surface) -> ExactnessReport:
    surface.require_embedding()
    junctions = []
    for name, seq in (
        ("NST'", _nst_sequence(surface)),
        ("ATT", _att_sequence(surface)),
        ("four-term", four_term_maps(surface)),
    ):
        rep = verify_exact(seq, short=True, name=name)
        for j in rep.junctions:
            j.name = f"{name}:{j.name}"
        junctions.extend(rep.junctions)
    junctions.append(tprime_equals_tdual(surface))
    junctions.append(transport_well_defined(surface))
    ns_A = discriminant_group(surface.ns)
    same = ns_A.invariant_factors == surface.A.invariant_factors
    lifts = surface.A.generator_lifts or ns_A.generator_lifts
    junctions.append(
        check(
            "A", "T'/T ≅ NS*/NS", same, lifts[0] if lifts else [],
            f"{surface.A.invariant_factors} vs {ns_A.invariant_factors}",
        )
    )
    return ExactnessReport("hodge", junctions)


def bfield_project(surface: K3Surface, B) -> List[Fraction]:
    """Class of the T-projection of a B-field in T ⊗ Q/Z, reduced mod T."""
    surface.require_embedding()
    B = frac_vec(B)
    if len(B) != K3_RANK:
        raise InvalidInput(f"B-field has {len(B)} entries, expected 22", "B")
    return reduce_mod(surface.t_lattice(), surface.project_T(B))

