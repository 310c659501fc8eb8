from __future__ import annotations

import json
import subprocess
import sys

import pytest

from pgcodes.cli import main


def _json(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


def test_manifest(capsys):
    assert main(["manifest"]) == 0
    assert "thm-main" in _json(capsys)


def test_build_writes_matrices(tmp_path, capsys):
    out = tmp_path / "b"
    assert main(["build", "--n", "2", "--p", "3", "--out", str(out)]) == 0
    man = json.loads((out / "manifest.json").read_text())
    assert (man["length"], man["dim"], man["dual_dim"]) == (13, 7, 6)
    assert man["theta"]["theta_2"] == 13
    assert (out / "generator.txt").read_text().startswith("3 2 1 1 13 7")
    assert (out / "dual.txt").exists()


def test_build_csv_exports(tmp_path):
    out = tmp_path / "c"
    assert main(["build", "--n", "2", "--p", "2", "--format", "csv", "--out", str(out)]) == 0
    assert (out / "points.csv").exists() and (out / "subspaces_1.csv").exists()


@pytest.mark.parametrize("argv", [
    ["build", "--n", "2", "--p", "4"],
    ["build", "--n", "2", "--p", "3", "--k", "5"],
    ["verify", "nope", "--n", "2", "--p", "3"],
    ["build", "--n", "2"],
])
def test_parameter_errors_exit_3(argv):
    assert main(argv) == 3


def test_cell_budget_exit_2():
    assert main(["build", "--n", "3", "--p", "3", "--budget-cells", "100"]) == 2


def test_verify_exhaustive(capsys):
    assert main(["verify", "res-dual-prime", "--n", "2", "--p", "3", "--k", "1"]) == 0
    rep = _json(capsys)
    assert rep["verdict"] == "proved-by-exhaustion"
    assert rep["check"]["min_weight"] == 6


def test_verify_budgeted_exit_2(capsys):
    argv = ["verify", "cor-plane", "--n", "2", "--p", "7", "--k", "1", "--budget-steps", "20000", "--samples", "2000"]
    assert main(argv) == 2
    assert _json(capsys)["verdict"] == "searched-no-counterexample"


def test_verify_text_format(capsys):
    assert main(["verify", "hull-min", "--n", "2", "--p", "3", "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert "verdict" in out and "proved-by-exhaustion" in out


def test_suite_table(capsys):
    assert main(["suite", "--n", "2", "--p", "2", "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].split()[:3] == ["id", "verdict", "hypotheses"]


def test_spectrum(capsys):
    assert main(["spectrum", "--n", "2", "--p", "2"]) == 0
    assert _json(capsys)["distribution"]["counts"] == {"0": 1, "3": 7, "4": 7, "7": 1}
    assert main(["spectrum", "--n", "2", "--p", "7", "--exhaustive-budget", "1000"]) == 2


def test_spread(capsys):
    assert main(["spread", "--n", "1", "--p", "3", "--h", "2"]) == 0
    rep = _json(capsys)
    assert rep["elements"] == 10 and rep["partition_verified"]
    assert rep["span_closure"] == {"pairs_checked": 45, "mode": "all pairs", "all_closed": True}


def test_blocking_default_and_export(tmp_path, capsys):
    pts = tmp_path / "b.txt"
    assert main(["blocking", "--n", "2", "--p", "3", "--h", "2", "--k", "1", "--export-points", str(pts)]) == 0
    rep = _json(capsys)
    assert len(rep["points"]) == 13
    cert = rep["certificate"]
    assert cert["is_blocking"] and cert["is_minimal"] and cert["is_small"]
    assert set(cert["nonempty_residue_histogram"]) == {"1"}
    assert len(pts.read_text().split()) == 3 + 13


def test_blocking_wrong_dimension_exit_3(tmp_path):
    u = tmp_path / "u.txt"
    u.write_text("1 0 0 0 0 0\n0 0 1 0 0 0\n")
    assert main(["blocking", "--n", "2", "--p", "3", "--h", "2", "--k", "1", "--subspace-file", str(u)]) == 3


def test_output_file_is_deterministic_json(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["verify", "res-prime-plane", "--n", "2", "--p", "3", "--out", str(path)]) == 0
    ra, rb = json.loads(a.read_text()), json.loads(b.read_text())
    ra.pop("timing"), rb.pop("timing")
    assert ra == rb


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pgcodes", "build", "--n", "2", "--p", "6"], capture_output=True)
    assert proc.returncode == 3


def test_main_statement_below_hypothesis(capsys):
    assert main(["verify", "thm-main", "--n", "2", "--p", "3", "--h", "1", "--k", "1"]) == 0
    rep = _json(capsys)
    assert rep["verdict"] == "hypothesis-not-met"
    obs = rep["observation"]
    assert obs["interval"] == {"lo": 4, "hi": 6, "lo_open": True, "hi_open": True}
    assert obs["gap"]["mode"] == "exhaustive" and obs["gap"]["verdict"] == "empty"
    assert "p_gt_5" in rep["note"] and "res-prime-plane" in rep["note"]


def test_build_solid_hyperplanes(capsys):
    assert main(["build", "--n", "3", "--p", "2", "--h", "1", "--k", "2"]) == 0
    man = _json(capsys)
    assert man["length"] == 15 and man["dim"] == 5
