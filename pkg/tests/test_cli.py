import io
import json
import re
import subprocess
from fractions import Fraction

import pytest

from shak3.brauer import decompose
from shak3.cli import run
from shak3.corpus import vec
from shak3.elliptic import jacobian_sequence_check
from shak3.lattice import IntLattice

from cache import FIXTURES, surface


def invoke(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, json.loads(out.getvalue())


def job(tmp_path, data, name="job.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def frac(d):
    return Fraction(int(d["num"]), int(d["den"]))


def test_disc():
    code, rep = invoke("disc", "--in", str(FIXTURES / "disc_2.json"))
    assert code == 0
    assert rep["results"]["invariant_factors"] == [2]
    assert rep["command"] == "disc" and rep["schema"] == "sha-k3/report/1"


def test_sha_u2():
    code, rep = invoke("sha", "--in", str(FIXTURES / "u2_full.json"))
    assert code == 0 and rep["ok"]
    r = rep["results"]
    assert r["m"] == 2
    assert r["ker_zeta"]["invariant_factors"] == [2]
    assert r["T_tilde_index"] == 2
    assert all(v["passed"] for v in rep["verdicts"])


def test_sha_abstract():
    code, rep = invoke("sha", "--in", str(FIXTURES / "u2_abstract.json"))
    assert code == 0
    assert rep["results"]["structure"] == "extension of Br by Z/2"
    assert rep["verdicts"] == []


@pytest.mark.parametrize(
    "fixture, field, kind",
    [
        ("bad_nonsymmetric.json", "surface.gram", "InvalidInput"),
        ("bad_embedding.json", "surface.embedding", "InvalidInput"),
        ("bad_h_zero.json", "h", "ZeroClass"),
    ],
)
def test_invalid_inputs(fixture, field, kind, capsys):
    code, rep = invoke("sha", "--in", str(FIXTURES / fixture))
    assert code == 1
    assert rep["ok"] is False
    assert rep["error"]["field"] == field
    assert rep["error"]["type"] == kind
    assert field in capsys.readouterr().err


def test_missing_file():
    code, rep = invoke("disc", "--in", "/nonexistent/job.json")
    assert code == 1 and rep["error"]["field"] == "--in"


def test_each_command_on_the_full_fixture():
    path = str(FIXTURES / "u2_full.json")
    for cmd in ("div", "hodge", "restricted", "decompose", "degree-class", "elliptic-twist", "verify-all"):
        code, rep = invoke(cmd, "--in", path)
        assert code == 0, (cmd, rep)
    _, rep = invoke("div", "--in", path)
    assert rep["results"] == {"m": 2, "primitive": True}
    _, rep = invoke("restricted", "--in", path)
    assert rep["results"]["core"]["invariant_factors"] == [2, 2]
    assert rep["results"]["ker_restriction"]["quotient_cyclic_of_order_m"]
    _, rep = invoke("decompose", "--in", path)
    expected = decompose(surface("U(2)"), [Fraction(x, 2) for x in vec(e0=1)])
    assert rep["results"]["order"] == 2
    assert rep["results"]["in_SBrO"] == expected.in_sbro
    assert [frac(x) for x in rep["results"]["alpha0"]] == list(expected.alpha0)
    _, rep = invoke("degree-class", "--in", path)
    assert rep["results"]["order"] == 2
    _, rep = invoke("elliptic-twist", "--in", path)
    assert rep["results"]["index"] == 2


def test_degrees():
    code, rep = invoke("degrees", "--in", str(FIXTURES / "degrees.json"))
    assert code == 0
    assert [frac(d) for d in rep["results"]["degrees"]] == [Fraction(1, 3), Fraction(4, 3)]


def test_big_integers_travel_as_strings(tmp_path):
    big = 2**60
    code, rep = invoke("disc", "--in", job(tmp_path, {"surface": {"gram": [[str(big)]]}}))
    assert code == 0
    assert rep["results"]["det"] == str(big)
    assert rep["results"]["invariant_factors"] == [str(big)]


def test_verification_failure_exits_two_with_reproducible_witness(tmp_path):
    data = {"T0": [[2]], "beta": {"num": [1], "den": 2}, "T_S": [[6]]}
    code, rep = invoke("elliptic-twist", "--in", job(tmp_path, data))
    assert code == 2 and rep["ok"] is False
    failing = [j for v in rep["verdicts"] for j in v["junctions"] if not j["passed"]]
    assert failing and all(j["witness"] is not None for j in failing)
    again = jacobian_sequence_check(IntLattice([[2]]), [Fraction(1, 2)], IntLattice([[6]]))
    redo = {(j.name, j.check): [Fraction(x) for x in j.witness] for j in again.failures}
    for j in failing:
        assert [frac(x) if isinstance(x, dict) else Fraction(x) for x in j["witness"]] == redo[(j["name"], j["check"])]


def test_imprimitive_flag(tmp_path):
    data = {"surface": {"gram": [[0, 2], [2, 0]]}, "h": [2, 0]}
    path = job(tmp_path, data)
    code, rep = invoke("sha", "--in", path)
    assert code == 1 and rep["error"]["type"] == "ImprimitiveClass"
    code, rep = invoke("sha", "--in", path, "--allow-imprimitive")
    assert code == 0
    assert "discrepancy" in rep["results"] or rep["results"]["zeta_surjective"]


def test_pretty_matches_compact():
    path = str(FIXTURES / "u2_full.json")

    def strip(r):
        r.pop("timing")
        return r

    assert strip(invoke("sha", "--in", path)[1]) == strip(invoke("sha", "--in", path, "--pretty")[1])


def test_fuzz_is_seeded(monkeypatch):
    path = str(FIXTURES / "disc_2.json")
    monkeypatch.setenv("SHA_K3_SEED", "7")
    a = invoke("verify-all", "--in", path, "--fuzz", "2")
    b = invoke("verify-all", "--in", path, "--fuzz", "2")
    assert a[0] == b[0] == 0
    assert a[1]["results"]["fuzz"] == b[1]["results"]["fuzz"]
    assert a[1]["results"]["fuzz"]["seed"] == 7


def test_console_script():
    proc = subprocess.run(
        ["sha-k3", "disc", "--in", str(FIXTURES / "disc_2.json")], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    rep = json.loads(proc.stdout)
    assert rep["results"]["invariant_factors"] == [2]
    assert re.fullmatch(r"\d+\.\d{6}", rep["timing"]["seconds"])
