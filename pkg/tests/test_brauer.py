from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from shak3.brauer import (
    SpecialBrauerClass,
    brauer_presentations,
    class_order,
    decompose,
    ker_restriction,
    restricted_core,
    restricted_core_matches_dual,
    sbro_order,
)
from shak3.corpus import CORPUS, vec
from shak3.errors import ZeroClass
from shak3.k3 import lam
from shak3.lattice import IntLattice, divisibility
from shak3.linalg import content, matvec
from shak3.qzmod import Subgroup, kernel_cokernel

from cache import CORPUS_NAMES, surface
from oracles import dual_basis, in_lattice

F = Fraction
U = IntLattice([[0, 1], [1, 0]])
U2 = IntLattice([[0, 2], [2, 0]])


def test_unimodular_sbro_is_br():
    p = brauer_presentations(surface("U"))
    assert p.sbro.denominator == p.br.denominator
    assert p.a.is_trivial()


def test_two_polarized_kernel():
    p = brauer_presentations(surface("<2>"))
    assert kernel_cokernel(p.sbro_to_br).kernel.order() == 2


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_presentations_on_corpus(name):
    s = surface(name)
    p = brauer_presentations(s)
    rep = p.verify()
    assert rep.passed, str(rep)
    assert kernel_cokernel(p.sbro_to_br).kernel.order() == abs(s.ns.det)
    assert kernel_cokernel(p.sbro_to_br).cokernel.is_trivial()


def test_ker_restriction_unimodular():
    k = ker_restriction(U, [1, 0])
    assert k.m == 1
    assert k.contains_perp
    assert k.presentation.carrier == k.perp


def test_ker_restriction_u2():
    k = ker_restriction(U2, [1, 0])
    assert k.m == 2
    assert k.quotient.invariant_factors == (2,)
    assert k.quotient_is_cyclic_of_order_m
    # (v.h) = 2 v_f, so v = (0, 1/2) lies in the kernel but not in h^perp + NS
    assert k.presentation.carrier.contains([0, F(1, 2)])
    assert not k.perp.contains([0, F(1, 2)])


def test_ker_restriction_zero_class():
    with pytest.raises(ZeroClass):
        ker_restriction(U, [0, 0])


@pytest.mark.parametrize("entry", CORPUS, ids=CORPUS_NAMES)
def test_ker_restriction_on_corpus(entry):
    ns = entry.ns()
    k = ker_restriction(ns, entry.h)
    assert k.contains_perp
    assert k.quotient_is_cyclic_of_order_m
    assert k.m == divisibility(ns, entry.h)
    assert k.monotone(2) and k.monotone(3)


def test_restricted_core_examples():
    assert restricted_core(U).is_trivial()
    assert restricted_core(U2).finite_group().invariant_factors == (2, 2)
    for k in (1, 2, 3, 5):
        assert restricted_core(IntLattice([[2 * k]])).finite_group().invariant_factors == (2 * k,)


@pytest.mark.parametrize("entry", CORPUS, ids=CORPUS_NAMES)
def test_restricted_core_is_dual(entry):
    ns = entry.ns()
    assert restricted_core_matches_dual(ns)
    assert restricted_core(ns).carrier == Subgroup.of_lattice(dual_basis(ns.matrix()), ns.rank)


def test_decompose_integral():
    s = surface("<2>")
    d = decompose(s, vec(f2=-1, r9=2))
    assert not any(d.alpha0 + d.alpha1)
    assert d.in_sbro


def test_decompose_integral_is_trivial_up_to_gluing():
    s = surface("<2>")
    d = decompose(s, vec(e0=3, f2=-1, r9=2))
    assert d.in_sbro
    assert s.Tprime.contains(d.alpha0)
    moved = s.transport(d.alpha1)
    assert s.t_lattice().contains([x + y for x, y in zip(d.alpha0, moved)])


def test_decompose_half_transcendental():
    s = surface("<2>")
    d = decompose(s, [F(x, 2) for x in vec(e0=1, f0=-1)])
    assert sbro_order(s, d.alpha0) == 2
    assert not any(d.alpha1)
    assert d.in_sbro


def test_decompose_third_of_ns():
    s = surface("<2>")
    d = decompose(s, [F(x, 3) for x in vec(e0=1, f0=1)])
    assert not d.in_sbro
    assert d.alpha1 == (F(1, 3),)


def test_class_order_examples():
    L = vec(e0=1, f0=2, r7=-1)
    assert class_order(SpecialBrauerClass(L)) == 1
    assert class_order(SpecialBrauerClass.from_fraction(L, 3)) == 3
    assert class_order(SpecialBrauerClass.from_fraction([2 * x for x in L], 4)) == 2


frac = st.builds(F, st.integers(-11, 11), st.integers(1, 6))
vectors = st.lists(frac, min_size=22, max_size=22)


@settings(max_examples=25)
@given(st.sampled_from(["<2>", "U(2)", "[[2,3],[3,0]]"]), vectors, vectors)
def test_decompose_additive(name, a, b):
    s = surface(name)
    da, db = decompose(s, a), decompose(s, b)
    dab = decompose(s, SpecialBrauerClass(a) + SpecialBrauerClass(b))
    T, NS = s.t_lattice(), Subgroup.of_lattice([[int(i == j) for j in range(s.rho)] for i in range(s.rho)], s.rho)
    assert T.contains([x + y - z for x, y, z in zip(da.alpha0, db.alpha0, dab.alpha0)])
    assert NS.contains([x + y - z for x, y, z in zip(da.alpha1, db.alpha1, dab.alpha1)])
    if da.in_sbro and db.in_sbro:
        assert dab.in_sbro
    if da.in_sbro != db.in_sbro:
        assert not dab.in_sbro


@settings(max_examples=25)
@given(st.sampled_from(["<2>", "U(2)", "U+<-2>"]), vectors)
def test_components_are_killed_by_the_order(name, a):
    """n·α ∈ Λ forces n·α0 ∈ T' and n·α1 ∈ NS*."""
    s = surface(name)
    n = class_order(a)
    d = decompose(s, a)
    assert s.Tprime.contains([n * x for x in d.alpha0])
    assert in_lattice(dual_basis(s.ns.matrix()), [n * x for x in d.alpha1])
    assert [p + t for p, t in zip(d.ns_part, d.t_part)] == [F(x) for x in a]
    Q = lam().matrix()
    assert not any(sum(p * q for p, q in zip(d.t_part, matvec(Q, list(e)))) for e in s.embedding)


@given(st.sampled_from([c for c in CORPUS if c.ns().rank <= 4]), st.data())
def test_quotient_order_is_divisibility(entry, data):
    ns = entry.ns()
    h = data.draw(st.lists(st.integers(-3, 3), min_size=ns.rank, max_size=ns.rank))
    assume(any(h) and content(h) == 1 and any(matvec(ns.matrix(), h)))
    k = ker_restriction(ns, h)
    assert k.quotient.order == divisibility(ns, h)
    assert k.quotient_is_cyclic_of_order_m
