"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see only these lines.
"""

import io
import json
import random
from fractions import Fraction

import pytest

from shak3.brauer import brauer_presentations
from shak3.cli import run
from shak3.corpus import CORPUS, random_gram
from shak3.degrees import degree_window, enumerate_degrees
from shak3.elliptic import beta_order, jacobian_sequence_check, twist_transcendental
from shak3.k3 import _att_sequence, _nst_sequence, four_term_maps, hodge_sequence_suite
from shak3.lattice import IntLattice, discriminant_group
from shak3.qzmod import (
    QZModMorphism,
    QZModPresentation,
    element_order,
    induced_morphism,
    kernel_cokernel,
    verify_exact,
)
from shak3.normal_forms import hnf
from shak3.sha import degree_class, diagram_checks, sha_identity, sha_order, sha_product

from cache import CORPUS_NAMES, FIXTURES, sha, surface
from oracles import (
    apply,
    determinantal_invariant_factors,
    discriminant_cosets,
    in_generated,
    in_subgroup,
    same_group,
)

F = Fraction


@pytest.fixture
def verdict(capsys):
    def say(number, title, ok, detail=""):
        with capsys.disabled():
            line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}"
            print(f"\n{line}" + (f" ({detail})" if detail else ""))
        assert ok, detail

    return say


def test_discriminant_groups(verdict):
    rng = random.Random(1)
    problems = []
    enumerated = 0
    for n in range(200):
        gram = random_gram(rng, rng.randint(1, 4), 200)
        A = discriminant_group(IntLattice(gram))
        det = abs(IntLattice(gram).det)
        nontrivial = [d for d in determinantal_invariant_factors(gram) if d > 1]
        if A.order != det or list(A.invariant_factors) != nontrivial:
            problems.append((gram, A.invariant_factors))
        if det <= 50:
            enumerated += 1
            if not same_group(discriminant_cosets(gram), A.invariant_factors):
                problems.append((gram, "coset enumeration"))
    verdict(1, "discriminant order and invariant factors", not problems, f"200 grams, {enumerated} enumerated; {problems[:2]}")


def test_gluing(verdict):
    problems = []
    for entry in CORPUS:
        s = surface(entry.name)
        if s.A.invariant_factors != discriminant_group(s.ns).invariant_factors:
            problems.append((entry.name, "T'/T vs NS*/NS"))
        if hnf([list(v) for v in s.Tprime.lattice]) != hnf([list(v) for v in s.t_dual().lattice]):
            problems.append((entry.name, "T' != T*"))
    verdict(2, "gluing T'/T = NS*/NS and T' = T*", not problems and len(CORPUS) >= 10, f"{len(CORPUS)} embeddings; {problems}")


def corpus_sequences():
    seqs = []
    for entry in CORPUS:
        s = surface(entry.name)
        seqs.append((entry.name, "NST'", _nst_sequence(s)))
        seqs.append((entry.name, "ATT", _att_sequence(s)))
        seqs.append((entry.name, "four-term", four_term_maps(s)))
        for label, seq in brauer_presentations(s).sequences().items():
            seqs.append((entry.name, label, list(seq)))
        g = sha(entry.name)
        seqs.append((entry.name, "Z/m->Sha->Br", [g.kernel_copy, g.to_br]))
    return seqs


def _image_gens(f, vectors):
    return [apply(f.matrix, v) for v in vectors]


def _in_image(f, w):
    """w in f(source carrier) + target denominator, decided by the oracle."""
    src, den = f.source.carrier, f.target.denominator
    div = _image_gens(f, src.divisible) + [list(d) for d in den.divisible]
    lat = _image_gens(f, src.lattice) + [list(v) for v in den.lattice]
    return in_generated(div, lat, w)


def _reproduce(seq, j):
    """Re-derive a failing junction from its witness without rerunning verify_exact."""
    w = [F(x) for x in j.witness]
    labels = [f.name or f"f{i}" for i, f in enumerate(seq)]
    pairs = [f"{a}|{b}" for a, b in zip(labels, labels[1:])]
    if j.check == "well-defined":
        f = seq[labels.index(j.name)]
        fw = apply(f.matrix, w)
        if f.source.denominator.contains(w):
            return not f.target.denominator.contains(fw)
        return f.source.carrier.contains(w) and not f.target.carrier.contains(fw)
    if j.check == "composition-zero":
        k = pairs.index(j.name)
        f, g = seq[k], seq[k + 1]
        return not g.target.denominator.contains(apply(g.matrix, apply(f.matrix, w)))
    if j.check == "kernel=image":
        k = pairs.index(j.name)
        f, g = seq[k], seq[k + 1]
        in_ker = g.target.denominator.contains(apply(g.matrix, w))
        return f.target.carrier.contains(w) and in_ker != _in_image(f, w)
    if j.check == "injective":
        f = seq[0]
        return not f.source.denominator.contains(w) and f.target.denominator.contains(apply(f.matrix, w))
    if j.check == "surjective":
        g = seq[-1]
        return g.target.carrier.contains(w) and not _in_image(g, w)
    return False


def _is_noop(f, i, j, delta):
    """delta·E_ij sends the source carrier into the target denominator."""
    col_i = [F(0)] * f.target.dim
    col_i[i] = F(1)
    den = f.target.denominator
    for d in f.source.carrier.divisible:
        if d[j] and not in_subgroup(den.divisible, [], col_i):
            return False
    for v in f.source.carrier.lattice:
        shift = [delta * v[j] * c for c in col_i]
        if not in_subgroup(den.divisible, den.lattice, shift):
            return False
    return True


def _composites_vanish(seq):
    """Oracle check that every g∘f sends carrier generators into the denominator."""
    for f, g in zip(seq, seq[1:]):
        den = g.target.denominator
        for v in f.source.carrier.divisible:
            if not in_subgroup(den.divisible, [], apply(g.matrix, apply(f.matrix, v))):
                return False
        for v in f.source.carrier.lattice:
            if not in_subgroup(den.divisible, den.lattice, apply(g.matrix, apply(f.matrix, v))):
                return False
    return True


def _corruption(rng):
    # integral changes often define another legitimate morphism, so corrupt by a proper fraction
    k = rng.choice([2, 3, 5, 7])
    return F(rng.choice([-1, 1]) * rng.randrange(1, k), k)


def test_exact_sequences_and_mutations(verdict):
    seqs = corpus_sequences()
    failed = [(n, l) for n, l, seq in seqs if not verify_exact(seq, short=True).passed]
    failed += [(e.name, "hodge suite") for e in CORPUS if not hodge_sequence_suite(surface(e.name)).passed]
    failed += [(e.name, "diagram") for e in CORPUS if not diagram_checks(sha(e.name)).passed]

    rng = random.Random(2026)
    detected = noops = still_exact = 0
    unexplained = []
    candidates = [(n, l, seq) for n, l, seq in seqs if any(f.source.dim and f.target.dim for f in seq)]
    for _ in range(100):
        name, label, seq = rng.choice(candidates)
        k = rng.choice([i for i, f in enumerate(seq) if f.source.dim and f.target.dim])
        f = seq[k]
        i, j = rng.randrange(f.target.dim), rng.randrange(f.source.dim)
        delta = _corruption(rng)
        rows = [list(r) for r in f.matrix]
        rows[i][j] += delta
        mutated = list(seq)
        mutated[k] = QZModMorphism(f.source, f.target, rows, f.name)
        rep = verify_exact(mutated, short=True)
        bad = [x for x in rep.failures if x.witness is not None]
        if not rep.passed and bad and all(_reproduce(mutated, x) for x in bad):
            detected += 1
        elif rep.passed and _is_noop(f, i, j, delta):
            noops += 1
        elif rep.passed and _composites_vanish(mutated):
            still_exact += 1
        else:
            unexplained.append((name, label, k, i, j, str(delta)))
    detail = f"{len(seqs)} sequences, {len(failed)} failing; mutations detected {detected}/100, no-ops {noops}, still exact {still_exact}"
    ok = not failed and detected >= 95 and not unexplained
    verdict(3, "exact-sequence suite and mutation harness", ok, detail + (f"; unexplained {unexplained}" if unexplained else ""))


def test_sha_structure(verdict):
    g = sha("U(2)")
    problems = []
    if (g.m, g.ker_zeta.invariant_factors, g.index()) != (2, (2,), 2):
        problems.append(("U(2)", g.m, g.ker_zeta.invariant_factors, g.index()))
    unimodular = [e.name for e in CORPUS if abs(e.ns().det) == 1]
    for name in unimodular:
        u = sha(name)
        kc = kernel_cokernel(u.to_br)
        iso = u.T_tilde == u.surface.Tprime and kc.kernel.is_trivial() and kc.cokernel.is_trivial()
        if not iso:
            problems.append((name, "Sha->Br not an isomorphism"))
    ok = not problems and bool(unimodular)
    verdict(4, "Sha structure for U(2) and unimodular NS", ok, f"unimodular: {unimodular}; {problems}")


def test_degree_bookkeeping(verdict):
    problems = []
    if enumerate_degrees(1, 3, 2) != [F(1, 3), F(4, 3)]:
        problems.append("enumerate_degrees(1, 3, 2)")
    for name in CORPUS_NAMES:
        g = sha(name)
        classes = [degree_class(g, d) for d in range(g.m)]
        if len({tuple(c) for c in classes}) != g.m or degree_class(g, 0) != sha_identity(g):
            problems.append((name, "not injective"))
        for a in range(g.m):
            for b in range(g.m):
                if sha_product(g, classes[a], classes[b]) != classes[(a + b) % g.m]:
                    problems.append((name, "not a homomorphism", a, b))
        if g.m > 1 and sha_order(g, classes[1]) != g.m:
            problems.append((name, "order of the generator"))
    rng = random.Random(3)
    for _ in range(1000):
        d = F(rng.randint(-10**6, 10**6), rng.randint(1, 999))
        r, m = rng.randint(1, 9), rng.randint(1, 9)
        w = degree_window(d, r, m)
        if degree_window(w, r, m) != w or not 0 <= w < r * m or (d - w) % (r * m):
            problems.append(("window", d, r, m))
    verdict(5, "degree enumeration, degree classes, window idempotence", not problems, f"{problems[:3]}")


def test_elliptic_comparison(verdict):
    cases = [
        ("<2>", IntLattice([[2]]), [F(1, 2)]),
        ("<6>", IntLattice([[6]]), [F(1, 3)]),
        ("U+<-2>", IntLattice([[0, 1, 0], [1, 0, 0], [0, 0, -2]]), [F(1, 2), 0, F(1, 2)]),
    ]
    problems = []
    for name, T0, beta in cases:
        n = beta_order(beta)
        if twist_transcendental(T0, beta).index != n:
            problems.append((name, "index"))
        rep = jacobian_sequence_check(T0, beta)
        if not rep.passed:
            problems.append((name, str(rep)))
        k = T0.rank
        unit = [[int(i == j) for j in range(k)] for i in range(k)]
        br0 = QZModPresentation.divisible(unit, k)
        br = QZModPresentation.divisible(unit, k)
        tw = twist_transcendental(T0, beta).lattice.basis
        ker = kernel_cokernel(induced_morphism(br0, br, tw)).kernel
        cyclic = ker.finite_group().invariant_factors == (n,)
        generated = ker.contains(beta) and element_order(br0, beta) == n
        if not (cyclic and generated):
            problems.append((name, "kernel", ker.finite_group().invariant_factors))
    verdict(6, "elliptic index and restriction kernel", not problems, f"{problems}")


def _run(argv):
    out = io.StringIO()
    code = run(argv, out)
    return code, out.getvalue()


def test_cli_contract(verdict):
    path = str(FIXTURES / "u2_full.json")
    outputs = []
    for _ in range(3):
        code, text = _run(["verify-all", "--in", path])
        rep = json.loads(text)
        rep.pop("timing")
        outputs.append((code, json.dumps(rep, sort_keys=True)))
    same = len(set(outputs)) == 1 and outputs[0][0] == 0
    problems = [] if same else ["verify-all not deterministic"]
    for fixture, field in (
        ("bad_nonsymmetric.json", "surface.gram"),
        ("bad_embedding.json", "surface.embedding"),
        ("bad_h_zero.json", "h"),
    ):
        code, text = _run(["verify-all", "--in", str(FIXTURES / fixture)])
        rep = json.loads(text)
        if code != 1 or rep["ok"] or rep["error"]["field"] != field:
            problems.append((fixture, code, rep.get("error")))
    verdict(7, "CLI determinism and exit codes", not problems, f"{problems}")
