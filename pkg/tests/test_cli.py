import io
import json
import subprocess
import sys

import pytest

from encodecheck.cli import run
from encodecheck.harness import fixture_path


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def fig(name):
    return str(fixture_path(name))


def test_check_oc_fig1():
    code, out, _ = call("check", "oc", "--variant", "standard", "--rel-target", "RT", "-i", fig("fig1"))
    assert code == 0 and "holds" in out


def test_check_oc_fig2_machine():
    code, out, _ = call("--format", "machine", "check", "oc", "--variant", "standard",
                        "--rel-target", "RT", "-i", fig("fig2"))
    doc = json.loads(out)
    assert code == 1 and doc["verdict"] is False and doc["command"] == "check"
    assert [c["subject"] for c in doc["counterexamples"]] == [["s2", "t3"]]


@pytest.mark.parametrize("criterion, name, expected", [
    ("divergence-reflection", "fig1", 0),
    ("success-sensitiveness", "fig1", 0),
    ("barb-sensitiveness", "fig3", 0),
    ("full-abstraction", "fig2", 0),
])
def test_check_criteria(criterion, name, expected):
    assert call("check", criterion, "-i", fig(name))[0] == expected


def test_check_barb_has_fails():
    code, out, _ = call("check", "barb-sensitiveness", "--strength", "has", "-i", fig("fig3"))
    assert code == 1 and "(s2, t2)" in out


def test_flags_after_command():
    assert call("check", "oc", "-i", fig("fig1"), "--format", "machine")[0] == 0


def test_relprops():
    code, out, _ = call("--format", "machine", "relprops", "RS", "-i", fig("fig2"))
    report = json.loads(out)["report"]
    assert code == 0 and report["equivalence"] and report["simulations"]["weak-bisim"]


def test_greatest():
    code, out, _ = call("--format", "machine", "greatest", "correspondence-sim", "--over", "target",
                        "--respect", "reaches-barb:respect", "-i", fig("fig3"))
    pairs = json.loads(out)["relation"]
    assert code == 0 and ["t2", "t3"] not in pairs and ["t1", "t3"] in pairs


def test_witness_and_verify_rhs():
    code, out, _ = call("witness", "OC-STANDARD", "-i", fig("fig1"))
    assert code == 0 and "bi-implication: True" in out
    code, out, _ = call("--format", "machine", "witness", "COMB-OC-SUCC-BARB", "-i", fig("fig3"))
    assert code == 0 and json.loads(out)["report"]["lhs"]["holds"] is False
    code, out, _ = call("verify-rhs", "COMB-OC-SUCC-BARB", "--rel", "R_corr_sim", "-i", fig("fig3"))
    assert code == 1 and "maps-into at (s2, t3)" in out


def test_witness_precondition_is_input_error():
    code, out, err = call("witness", "OC-STANDARD", "-i", fig("fig2"))
    assert code == 2 and out == "" and err.startswith("E_PRECONDITION")


@pytest.mark.parametrize("argv, token", [
    (["frobnicate"], "E_USAGE"),
    ([], "E_USAGE"),
    (["check", "oc", "--bogus"], "E_USAGE"),
    (["check", "oc"], "E_USAGE"),
    (["check", "oc", "--rel-target", "XX", "-i", "FIG1"], "E_USAGE"),
    (["check", "oc", "-i", "/nonexistent/file"], "E_PARSE"),
    (["greatest", "weak-bisim", "--respect", "divergent", "-i", "FIG1"], "E_USAGE"),
    (["witness", "NOT-A-LEMMA", "-i", "FIG1"], "E_USAGE"),
])
def test_usage_errors(argv, token):
    argv = [fig("fig1") if a == "FIG1" else a for a in argv]
    code, out, err = call(*argv)
    assert code == 2 and out == "" and token in err


def test_falsify_command():
    code, out, _ = call("--format", "machine", "falsify", "--lemma", "all", "--seed", "7", "--iters", "20")
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] is True and doc["report"]["discrepancy_count"] == 0
    assert len(doc["report"]["lemmas"]) == 19


def test_fixture_emit(tmp_path):
    target = tmp_path / "f1.instance"
    code, _, _ = call("fixture", "fig1", "--emit", str(target))
    assert code == 0
    assert target.read_text(encoding="utf-8") == fixture_path("fig1").read_text(encoding="utf-8")
    assert call("check", "oc", "-i", str(target))[0] == 0


def test_reports_are_byte_identical():
    argv = ("--format", "machine", "witness", "COMB-OC-SUCC-BARB", "-i", fig("fig3"))
    assert call(*argv) == call(*argv)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "encodecheck", "check", "divergence-reflection", "-i", fig("fig1")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "holds" in proc.stdout
