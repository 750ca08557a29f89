"""sha-k3 <command> --in <file> [--allow-imprimitive] [--json|--pretty]

Exit codes: 0 success, 1 input error, 2 a verification failed.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
import time
from typing import Callable, Dict, List, Tuple

from .brauer import (
    SpecialBrauerClass,
    brauer_presentations,
    class_order,
    decompose,
    ker_restriction,
    restricted_core,
    restricted_core_matches_dual,
    sbro_order,
)
from .corpus import random_embedding
from .degrees import degree_window, enumerate_degrees
from .elliptic import beta_order, fibre_check, jacobian_sequence_check, twist_transcendental
from .errors import InvalidInput, ShaK3Error
from .k3 import K3_RANK, K3Surface, hodge_sequence_suite
from .lattice import FinAbGroup, IntLattice, discriminant_group, divisibility
from .linalg import content, matvec
from .qzmod import ExactnessReport
from .serialize import (
    REPORT_SCHEMA,
    Job,
    blame,
    dumps,
    load_job,
    parse_gram,
    parse_matrix,
    parse_rational_vector,
    parse_vector,
)
from .sha import ShaGroup, degree_class, diagram_checks, sha_group, sha_order

Outcome = Tuple[dict, List[ExactnessReport]]


def _group(g: FinAbGroup) -> dict:
    return {
        "invariant_factors": list(g.invariant_factors),
        "order": g.order,
        "generators": [list(v) for v in g.generator_lifts],
    }


def _ns(job: Job) -> IntLattice:
    surface = job.require("surface")
    if not isinstance(surface, dict):
        raise InvalidInput("expected an object", "surface")
    if "gram" not in surface:
        raise InvalidInput("required field is missing", "surface.gram")
    return parse_gram(surface["gram"], "surface.gram")


def _surface(job: Job, need_embedding: bool = False) -> K3Surface:
    ns = _ns(job)
    raw = job.raw["surface"].get("embedding")
    if raw is None:
        if need_embedding:
            raise InvalidInput("this command needs an embedding", "surface.embedding")
        with blame("surface.gram"):
            return K3Surface(ns)
    emb = parse_matrix(raw, "surface.embedding", K3_RANK)
    with blame("surface.embedding"):
        return K3Surface(IntLattice(ns.gram, emb), emb)


def _h(job: Job, ns: IntLattice, key: str = "h") -> List[int]:
    h = parse_vector(job.require(key), key)
    if len(h) != ns.rank:
        raise InvalidInput(f"has length {len(h)}, NS has rank {ns.rank}", key)
    return h


def _sha(job: Job, allow: bool) -> ShaGroup:
    s = _surface(job)
    h = _h(job, s.ns)
    with blame("h"):
        return sha_group(s, h, allow_imprimitive=allow)


def _sha_results(sha: ShaGroup) -> dict:
    z = sha.zeta
    out = {
        "m": sha.m,
        "zeta_values": list(z.values),
        "A": _group(z.A),
        "ker_zeta": _group(z.kernel),
        "image_of_zeta": {"generator": z.image_generator, "order": z.image_order},
        "zeta_surjective": z.surjective,
        "structure": sha.structure(),
    }
    if not z.surjective:
        out["discrepancy"] = f"image of zeta has order {z.image_order}, not m = {sha.m}"
    if not sha.abstract:
        out["T_tilde_index"] = sha.index()
        out["T_tilde_basis"] = [list(v) for v in sha.T_tilde.lattice]
        out["degree_one_generator"] = list(sha.generator)
    return out


def cmd_disc(job: Job, allow: bool) -> Outcome:
    ns = _ns(job)
    with blame("surface.gram"):
        g = discriminant_group(ns)
    return {"rank": ns.rank, "det": ns.det, **_group(g)}, []


def cmd_div(job: Job, allow: bool) -> Outcome:
    ns = _ns(job)
    h = _h(job, ns)
    with blame("h"):
        m = divisibility(ns, h)
    return {"m": m, "primitive": content(h) == 1}, []


def cmd_sha(job: Job, allow: bool) -> Outcome:
    sha = _sha(job, allow)
    reports = [] if sha.abstract else [diagram_checks(sha)]
    return _sha_results(sha), reports


def cmd_hodge(job: Job, allow: bool) -> Outcome:
    s = _surface(job, need_embedding=True)
    results = {
        "T_rank": s.T.rank,
        "T_det": s.T.det,
        "A": _group(s.A),
        "Tprime_basis": [list(v) for v in s.Tprime.lattice],
    }
    return results, [hodge_sequence_suite(s), brauer_presentations(s).verify()]


def cmd_restricted(job: Job, allow: bool) -> Outcome:
    ns = _ns(job)
    with blame("surface.gram"):
        core = restricted_core(ns)
    results = {
        "core": _group(core.finite_group()),
        "equals_dual_quotient": restricted_core_matches_dual(ns),
    }
    if job.has("h"):
        h = _h(job, ns)
        with blame("h"):
            k = ker_restriction(ns, h)
        results["ker_restriction"] = {
            "m": k.m,
            "quotient_by_perp": _group(k.quotient),
            "contains_perp": k.contains_perp,
            "quotient_cyclic_of_order_m": k.quotient_is_cyclic_of_order_m,
            "monotone_under_doubling": k.monotone(2),
        }
    return results, []


def cmd_decompose(job: Job, allow: bool) -> Outcome:
    s = _surface(job, need_embedding=True)
    alpha = parse_rational_vector(job.require("alpha"), "alpha")
    with blame("alpha"):
        a = SpecialBrauerClass(alpha)
        d = decompose(s, a)
    return {
        "order": class_order(a),
        "alpha0": list(d.alpha0),
        "alpha0_order": sbro_order(s, d.alpha0),
        "alpha1": list(d.alpha1),
        "alpha1_order": class_order(d.alpha1),
        "in_SBrO": d.in_sbro,
    }, []


def cmd_degree_class(job: Job, allow: bool) -> Outcome:
    sha = _sha(job, allow)
    if sha.abstract:
        raise InvalidInput("degree classes need an embedding", "surface.embedding")
    d = job.int("d")
    with blame("d"):
        x = degree_class(sha, d)
    return {"m": sha.m, "d": d, "element": x, "order": sha_order(sha, x)}, []


def cmd_degrees(job: Job, allow: bool) -> Outcome:
    p, r, m = job.int("p"), job.int("r"), job.int("m")
    with blame("p"):
        degs = enumerate_degrees(p, r, m)
    return {"degrees": degs, "windowed": [degree_window(d, r, m) for d in degs]}, []


def _elliptic(job: Job) -> Outcome:
    T0 = parse_gram(job.require("T0"), "T0")
    beta = parse_rational_vector(job.require("beta"), "beta")
    T_S = parse_gram(job.raw["T_S"], "T_S") if job.has("T_S") else None
    with blame("beta"):
        tw = twist_transcendental(T0, beta)
        report = jacobian_sequence_check(T0, beta, T_S)
    return {
        "beta_order": beta_order(beta),
        "index": tw.index,
        "T_beta_gram": [list(r) for r in tw.lattice.gram],
        "T_beta_basis": [list(v) for v in tw.lattice.basis],
    }, [report]


def cmd_elliptic_twist(job: Job, allow: bool) -> Outcome:
    return _elliptic(job)


def _random_h(rng: random.Random, ns: IntLattice) -> List[int]:
    for _ in range(500):
        h = [rng.randint(-2, 2) for _ in range(ns.rank)]
        if content(h) == 1 and any(matvec(ns.matrix(), h)):
            return h
    raise RuntimeError("no primitive class with nonzero pairing found")


def _surface_suites(s: K3Surface, h, allow: bool) -> Outcome:
    sha = sha_group(s, h, allow_imprimitive=allow)
    reports = [hodge_sequence_suite(s), brauer_presentations(s).verify(), diagram_checks(sha)]
    return _sha_results(sha), reports


def cmd_verify_all(job: Job, allow: bool, fuzz: int = 0) -> Outcome:
    results: Dict[str, object] = {}
    reports: List[ExactnessReport] = []
    if job.has("surface"):
        s = _surface(job)
        with blame("surface.gram"):
            results["disc"] = _group(discriminant_group(s.ns))
            results["restricted_equals_dual"] = restricted_core_matches_dual(s.ns)
        if s.has_embedding:
            reports.append(hodge_sequence_suite(s))
            reports.append(brauer_presentations(s).verify())
        if job.has("h"):
            sha = _sha(job, allow)
            results["sha"] = _sha_results(sha)
            if not sha.abstract:
                reports.append(diagram_checks(sha))
        if job.has("f"):
            f = _h(job, s.ns, "f")
            with blame("f"):
                fc = fibre_check(s, f, allow_imprimitive=allow)
            results["fibre"] = {"m": fc.m, "structure": fc.structure, "section_isomorphism": fc.section_isomorphism}
    if job.has("T0"):
        res, reps = _elliptic(job)
        results["elliptic"] = res
        reports.extend(reps)
    if fuzz:
        seed = int(os.environ.get("SHA_K3_SEED", "0"))
        rng = random.Random(seed)
        cases = []
        for n in range(fuzz):
            s = random_embedding(rng)
            h = _random_h(rng, s.ns)
            res, reps = _surface_suites(s, h, allow)
            for r in reps:
                r.name = f"fuzz{n}:{r.name}"
            reports.extend(reps)
            cases.append({"gram": [list(r) for r in s.ns.gram], "h": h, "m": res["m"]})
        results["fuzz"] = {"seed": seed, "cases": cases}
    return results, reports


COMMANDS: Dict[str, Callable[..., Outcome]] = {
    "disc": cmd_disc,
    "div": cmd_div,
    "sha": cmd_sha,
    "hodge": cmd_hodge,
    "restricted": cmd_restricted,
    "decompose": cmd_decompose,
    "degree-class": cmd_degree_class,
    "degrees": cmd_degrees,
    "elliptic-twist": cmd_elliptic_twist,
    "verify-all": cmd_verify_all,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sha-k3", description="Brauer and Tate-Shafarevich groups of K3 lattices")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--in", dest="infile", required=True, help="job file (JSON)")
    p.add_argument("--allow-imprimitive", action="store_true")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="pretty", action="store_false", default=False)
    fmt.add_argument("--pretty", dest="pretty", action="store_true")
    p.add_argument("--fuzz", type=int, default=0, metavar="N", help="verify-all: add N random surfaces")
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    report = {"schema": REPORT_SCHEMA, "command": args.command}
    try:
        try:
            with open(args.infile, "rb") as fh:
                raw = fh.read()
        except OSError as exc:
            raise InvalidInput(str(exc.strerror or exc), "--in") from exc
        job = load_job(raw)
        report["input_digest"] = job.digest
        fn = COMMANDS[args.command]
        if args.command == "verify-all":
            results, reports = fn(job, args.allow_imprimitive, args.fuzz)
        else:
            results, reports = fn(job, args.allow_imprimitive)
    except ShaK3Error as exc:
        field = getattr(exc, "field", None)
        message = getattr(exc, "detail", None) or str(exc)
        report["ok"] = False
        report["error"] = {"type": type(exc).__name__, "field": field, "message": message}
        report["timing"] = {"seconds": f"{time.perf_counter() - start:.6f}"}
        out.write(dumps(report, args.pretty))
        print(f"sha-k3: error: {field or '<input>'}: {message}", file=sys.stderr)
        return 1
    ok = all(r.passed for r in reports)
    report["ok"] = ok
    report["results"] = results
    report["verdicts"] = [r.to_dict() for r in reports]
    report["timing"] = {"seconds": f"{time.perf_counter() - start:.6f}"}
    out.write(dumps(report, args.pretty))
    return 0 if ok else 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
