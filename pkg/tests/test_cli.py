"""Command-line grammar, outputs and exit codes."""

import csv
import json
import subprocess
import sys

import pytest

from dcalg.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, UsageError, parse_range, run


def _json(capsys, argv):
    code = run(argv)
    return code, json.loads(capsys.readouterr().out)


def _coeffs(doc):
    return {c["label"]: (int(c["num"]), int(c["den"])) for c in doc["coefficients"]}


def test_compute_center_example(capsys):
    code, doc = _json(capsys, ["compute", "--family", "center-sym", "--n", "4",
                               "--left", "ct:2,1,1", "--right", "ct:2,1,1"])
    assert code == EXIT_OK
    assert _coeffs(doc) == {"ct:1,1,1,1": (6, 1), "ct:3,1": (3, 1), "ct:2,2": (2, 1)}


def test_compute_gl_example(capsys):
    code, doc = _json(capsys, ["compute", "--family", "gl", "--q", "3", "--n", "2",
                               "--left", "glrep:2001", "--right", "glrep:2001", "--target", "glrep:1001"])
    assert code == EXIT_OK and _coeffs(doc) == {"glrep:1001": (12, 1)}


def test_compute_targets_keep_zeros(capsys):
    code, doc = _json(capsys, ["compute", "--family", "center-sym", "--n", "4", "--left", "ct:2",
                               "--right", "ct:2", "--target", "ct:4", "--target", "ct:∅"])
    assert code == EXIT_OK and _coeffs(doc) == {"ct:4": (0, 1), "ct:1,1,1,1": (6, 1)}


def test_compute_breakdown(capsys):
    code, doc = _json(capsys, ["compute", "--family", "hecke", "--n", "3", "--left", "coset:2",
                               "--right", "coset:2", "--breakdown"])
    assert code == EXIT_OK and len(doc["breakdown"]) == len(doc["coefficients"])


def test_verify_hypotheses_hecke(capsys):
    code, doc = _json(capsys, ["verify-hypotheses", "--family", "hecke", "--n-max", "3", "--hypothesis", "all"])
    assert code == EXIT_OK
    assert all(r["verdict"] == "pass" for r in doc["reports"])
    assert "H'0" not in {r["hypothesis"] for r in doc["reports"]}


def test_verify_hypotheses_failure_has_witness(capsys):
    code, doc = _json(capsys, ["verify-hypotheses", "--family", "diag-pair", "--n-max", "3", "--hypothesis", "H1"])
    assert code == EXIT_FAIL
    (report,) = doc["reports"]
    assert report["verdict"] == "fail" and report["witness"]["reason"] == "order mismatch"


def test_verify_theorem(capsys):
    code, doc = _json(capsys, ["verify-theorem", "--family", "center-sym", "--n", "4"])
    assert code == EXIT_OK and doc["verdict"] == "pass" and doc["checks"]
    code, doc = _json(capsys, ["verify-theorem", "--family", "hecke", "--n", "3", "--left", "coset:2",
                               "--right", "coset:2", "--target", "coset:2", "--breakdown"])
    assert code == EXIT_OK and "breakdown" in doc["checks"][0]


def test_polyfit(capsys):
    code, doc = _json(capsys, ["polyfit", "--family", "center-sym", "--left", "ct:2", "--right", "ct:2",
                               "--target", "ct:∅", "--n", "2..6", "--holdout", "7..8"])
    assert code == EXIT_OK and doc["polynomial_text"] == "1/2*n^2 - 1/2*n"
    assert doc["polynomial"] == [{"num": "0", "den": "1"}, {"num": "-1", "den": "2"}, {"num": "1", "den": "2"}]


def test_polyfit_failure_exits_one(capsys):
    code, doc = _json(capsys, ["polyfit", "--family", "diag-pair", "--left", "ipair:2:(∅)", "--right",
                               "ipair:1:(2)", "--target", "ipair:3:(∅)", "--n", "3..6", "--holdout", "7..7"])
    assert code == EXIT_FAIL and doc["verdict"] == "fail"


def test_selftest_subset(capsys):
    assert run(["selftest", "--criteria", "1,2"]) == EXIT_OK
    captured = capsys.readouterr()
    assert "criterion  1 PASS" in captured.err and "criterion  2 PASS" in captured.err


@pytest.mark.parametrize("argv", [
    [],
    ["compute", "--family", "nope", "--n", "2", "--left", "ct:2", "--right", "ct:2"],
    ["compute", "--family", "center-sym", "--n", "2", "--left", "ct:9", "--right", "ct:2"],
    ["compute", "--family", "center-sym", "--n", "3", "--left", "xx:2", "--right", "ct:2"],
    ["compute", "--family", "center-sym", "--left", "ct:2", "--right", "ct:2"],
    ["compute", "--family", "gl", "--n", "2", "--left", "glrep:2001", "--right", "glrep:2001"],
    ["polyfit", "--family", "center-sym", "--left", "ct:2", "--right", "ct:2", "--target", "ct:∅",
     "--n", "5..2"],
    ["verify-hypotheses", "--family", "hecke", "--n-max", "2", "--hypothesis", "H9"],
    ["selftest", "--criteria", "42"],
])
def test_usage_errors(argv, capsys):
    assert run(argv) == EXIT_USAGE
    assert capsys.readouterr().err


def test_parse_range():
    assert parse_range("3..5") == range(3, 6)
    assert parse_range("4") == range(4, 5)
    for bad in ("a..b", "5..3"):
        with pytest.raises(UsageError):
            parse_range(bad)


def test_csv_and_out(tmp_path, capsys):
    out = tmp_path / "c.csv"
    argv = ["compute", "--family", "center-sym", "--n", "4", "--left", "ct:2,1,1", "--right", "ct:2,1,1",
            "--format", "csv", "--out", str(out)]
    assert run(argv) == EXIT_OK
    assert capsys.readouterr().out == ""
    rows = list(csv.reader(out.read_text(encoding="utf-8").splitlines()))
    assert rows == [["label", "coefficient"], ["ct:1,1,1,1", "6/1"], ["ct:2,2", "2/1"], ["ct:3,1", "3/1"]]


def test_output_is_byte_deterministic():
    argv = [sys.executable, "-m", "dcalg", "compute", "--family", "hecke", "--n", "3",
            "--left", "coset:2", "--right", "coset:2,1", "--threads", "2"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv[:-2], capture_output=True, check=True).stdout
    assert first == second and first
