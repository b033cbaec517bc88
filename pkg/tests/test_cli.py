from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from cslab.cli import main

DATA = Path(__file__).resolve().parents[1] / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def report(tmp_path, capsys, *argv):
    out = tmp_path / "report.json"
    code, stdout, err = run(capsys, *argv, "--out", out)
    return code, json.loads(out.read_text()) if out.exists() else None, stdout, err


def test_carrier_check_valid(tmp_path, capsys):
    code, rep, stdout, _ = report(tmp_path, capsys, "carrier", "check", DATA / "mod2_mul.json")
    assert code == 0
    assert rep["valid"] and rep["square_generated"]
    assert rep["associativity_triples_checked"] == 8
    assert rep["schema_version"] and rep["command"] == "carrier" and rep["exit_status"] == 0


def test_carrier_check_invalid(tmp_path, capsys):
    code, rep, stdout, _ = report(tmp_path, capsys, "carrier", "check", "--carrier", DATA / "bad_table.json")
    assert code == 1
    assert not rep["valid"]
    assert "not associative" in rep["error"]


def test_chars_counts(tmp_path, capsys):
    code, rep, _, _ = report(tmp_path, capsys, "chars", "--carrier", DATA / "z3.json")
    assert code == 0 and rep["count"] == 4
    code, rep, _, _ = report(tmp_path, capsys, "chars", "--carrier", DATA / "mod2_mul.json")
    assert rep["count"] == 3


def test_additive_dims(tmp_path, capsys):
    assert report(tmp_path, capsys, "additive", "--carrier", DATA / "z5.json")[1]["dimension"] == 0
    assert report(tmp_path, capsys, "additive", "--carrier", DATA / "rat-add.json")[1]["dimension"] == 2
    assert report(tmp_path, capsys, "additive", "--carrier", DATA / "mod2_mul.json", "--domain", "1")[1]["dimension"] == 0


def test_gen_is_deterministic(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    argv = ["gen", "--family", "t1.6", "--carrier", DATA / "rat-add-1.json", "--seed", "42", "--lambda2", "1"]
    assert run(capsys, *argv, "--out", a)[0] == 0
    assert run(capsys, *argv, "--out", b)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["variants"]["corrected"]["residual"]["r1"] <= 1e-9
    assert rep["variants"]["corrected"]["residual"]["independent"] is True


def test_gen_both_modes_on_erratum(tmp_path, capsys):
    code, rep, stdout, _ = report(tmp_path, capsys, "gen", "--family", "t2.2", "--seed", "1", "--errata-mode", "both")
    assert code == 0
    assert not rep["variants"]["as-printed"]["passed"]
    assert rep["variants"]["corrected"]["passed"]
    assert "FAIL" in stdout and "pass" in stdout


def test_gen_as_printed_failure_exits_1(tmp_path, capsys):
    code, rep, _, _ = report(tmp_path, capsys, "gen", "--family", "t2.2", "--seed", "1", "--errata-mode", "as-printed")
    assert code == 1


def test_gen_on_finite_group_needs_additive(tmp_path, capsys):
    code, _, err = run(capsys, "gen", "--family", "t2.2", "--carrier", DATA / "z5.json")
    assert code == 2
    assert "additive dimension 0" in err


def test_verify_zero_quadruple(tmp_path, capsys):
    code, rep, stdout, _ = report(tmp_path, capsys, "verify", "--solution", DATA / "zero_quadruple.json",
                                  "--lambda1", "0", "--lambda2", "1")
    assert code == 1
    assert "independence hypothesis violated" in stdout
    assert rep["residual"]["max_abs"] == 0


def test_generated_instance_verifies_and_classifies(tmp_path, capsys):
    inst = tmp_path / "inst.json"
    assert run(capsys, "gen", "--family", "t1.6", "--seed", "42", "--instance", inst, "--out", tmp_path / "g.json")[0] == 0
    code, rep, _, _ = report(tmp_path, capsys, "verify", "--solution", inst)
    assert code == 0 and rep["verified"]
    code, rep, stdout, _ = report(tmp_path, capsys, "classify", "--solution", inst)
    assert code == 0
    assert "t1.6" in rep["family_ids"]
    assert all(e["fit_residual"] <= 1e-9 for m in rep["matches"] for e in m["families"])


def test_shipped_instance_file_classifies(tmp_path, capsys):
    code, rep, _, _ = report(tmp_path, capsys, "classify", "--solution", DATA / "t1.6_seed42.json")
    assert code == 0 and "t1.6" in rep["family_ids"]


def test_classify_non_solution_exits_1(tmp_path, capsys):
    one = {"kind": "character", "form": "exp", "b": [0]}
    two = {"kind": "sum", "terms": [{"coef": 2, "fn": one}]}
    sol = tmp_path / "bad.json"
    sol.write_text(json.dumps({"carrier": {"kind": "rat-add", "dim": 1}, "lambda1": 1, "lambda2": 1,
                               "components": {"f": one, "g1": one, "h": two, "g2": one}}))
    code, rep, stdout, _ = report(tmp_path, capsys, "classify", "--solution", sol)
    assert code == 1
    assert not rep["matched"] and "not a solution" in rep["error"]


def test_unknown_function_kind_exit_2(tmp_path, capsys):
    sol = tmp_path / "bad.json"
    sol.write_text(json.dumps({"carrier": {"kind": "rat-add", "dim": 1},
                               "components": {"f": {"kind": "bogus"}, "g": {"kind": "zero"}}}))
    code, _, err = run(capsys, "verify", "--solution", sol)
    assert code == 2 and "unknown function kind" in err


def test_oracle_suite(tmp_path, capsys):
    code, rep, stdout, _ = report(tmp_path, capsys, "oracle", "--suite", "prop34", "--draws", "0")
    assert code == 0 and rep["holds"]
    assert "prop34" in stdout


def test_catalog(tmp_path, capsys):
    code, rep, stdout, _ = report(tmp_path, capsys, "catalog")
    assert code == 0 and len(rep["templates"]) == 24
    code, rep, _, _ = report(tmp_path, capsys, "catalog", "--family", "t2.4")
    assert rep["templates"][0]["id"] == "t2.4"


def test_adjudicate_single(tmp_path, capsys):
    code, rep, stdout, _ = report(tmp_path, capsys, "adjudicate", "--family", "t1.3")
    assert code == 0
    (rec,) = rep["records"]
    assert rec["verdict"] == "corrected"
    assert rec["corrected"]["max_relative_residual"] <= 1e-12
    assert rec["printed"]["max_relative_residual"] > 1e-3
    assert rec["catalog"]["consistent"]


@pytest.mark.parametrize("argv", [
    [],
    ["gen"],
    ["gen", "--family", "t9.9"],
    ["oracle", "--suite", "nope"],
    ["adjudicate"],
    ["gen", "--family", "t1.6", "--lambda2", "[1,2,3]"],
    ["gen", "--family", "t1.6", "--seed", "-1"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_missing_file_exit_2(capsys):
    assert run(capsys, "chars", "--carrier", "/nonexistent.json")[0] == 2


def test_report_to_stdout_without_out(capsys):
    code, out, _ = run(capsys, "catalog", "--family", "p41.1")
    assert code == 0
    summary, _, body = out.partition("\n")
    assert json.loads(body)["command"] == "catalog"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "cslab", "catalog", "--family", "t1.1"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "t1.1" in res.stdout
