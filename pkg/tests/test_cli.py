import csv
import json
import subprocess
import sys

import pytest

from symlfun import cli
from symlfun.hecke_forms import export_eigenvalues, hecke_eigenform


def run_json(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_verify_decomp_multiset(capsys):
    code, doc = run_json(capsys, "verify-decomp", "--level", "multiset", "--n-max", "20", "--r-max", "20")
    assert code == 0
    assert len(doc["result"]["reports"]) == 420
    rep = doc["result"]["reports"][0]
    assert set(rep) == {"n", "r", "level", "pass", "max_deviation", "cardinality"}


@pytest.mark.parametrize("level", ["local", "global"])
def test_verify_decomp_levels(capsys, level):
    code, doc = run_json(capsys, "verify-decomp", "--level", level, "--n-max", "2", "--r-max", "1", "--X", "300")
    assert code == 0 and doc["result"]["pass"]
    assert {r["level"] for r in doc["result"]["reports"]} == {level}


def test_kernel_check(capsys):
    code, doc = run_json(capsys, "kernel-check", "--r", "2", "--x", "2", "--height", "1e4")
    assert code == 0
    assert doc["result"]["closed_form"] == 0.125
    assert abs(doc["result"]["quadrature"] - 0.125) < 1e-4


def test_conductor(capsys):
    code, doc = run_json(capsys, "conductor", "--n", "2", "--k", "12")
    assert code == 0 and doc["result"]["Q"] == 312


def test_gamma(capsys):
    code, doc = run_json(capsys, "gamma", "--n", "2", "--k", "12")
    assert code == 0
    assert [f["display"] for f in doc["result"]["factors"]] == ["Gamma_R(s+1)", "Gamma_C(s+11)"]


def test_zero_free(capsys):
    code, doc = run_json(capsys, "zero-free", "--n", "1", "--k", "12", "--c", "0.5")
    assert code == 0
    assert doc["result"]["explicit_n"]["c"] == 0.5
    assert doc["result"]["log_k"]["form"] == "log_k"


def test_config_embedded(capsys):
    code, doc = run_json(capsys, "aux-positivity", "--n", "2", "--X", "300")
    assert code == 0 and doc["result"]["pass"]
    cfg = doc["config"]
    assert cfg["subcommand"] == "aux-positivity"
    assert (cfg["weight"], cfg["power"], cfg["truncation"]) == (12, 2, 300)
    assert cfg["precision"] == "double" and cfg["format"] == "json"
    assert doc["result"]["total_degree"] == 16


def test_coeffs_csv(capsys):
    assert cli.run(["coeffs", "--n", "1", "--X", "5"]) == 0
    text = capsys.readouterr().out
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    rows = list(csv.reader(lines))
    assert rows[0] == ["m", "lambda"]
    assert float(rows[2][1]) == pytest.approx(-0.5303300858899106)
    assert "config:" in text


def test_eigenform_and_import(tmp_path, capsys):
    path = tmp_path / "delta.txt"
    assert cli.run(["eigenform", "--k", "12", "--X", "400", "-o", str(path)]) == 0
    first = path.read_text().splitlines()[0]
    assert first == "# weight=12 normalized=true"
    code, doc = run_json(capsys, "coeffs", "--n", "2", "--X", "300", "--eigenvalues", str(path), "--format", "json")
    assert code == 0
    f = hecke_eigenform(12, 3)
    assert doc["result"]["lambda"][1] == pytest.approx(f.lam[2] ** 2 - 1, abs=1e-13)


def test_eigenvalue_file_too_short(tmp_path, capsys):
    path = tmp_path / "short.txt"
    with open(path, "w") as fh:
        export_eigenvalues(hecke_eigenform(12, 20), fh)
    assert cli.run(["coeffs", "--n", "2", "--X", "100", "--eigenvalues", str(path)]) == 2
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"] == "precision"


def test_numeric_weight(capsys):
    code, doc = run_json(capsys, "coeffs", "--n", "1", "--k", "24", "--index", "1", "--X", "10", "--format", "json")
    assert code == 0 and doc["config"]["extra"]["index"] == 1


def test_usage_error_is_json(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.run(["conductor"])
    assert exc.value.code == 2
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"] == "usage"


def test_bad_precision(capsys):
    assert cli.run(["conductor", "--n", "2", "--precision", "quad"]) == 2
    assert json.loads(capsys.readouterr().err)["error"] == "usage"


def test_convergence_failure_exit_2(capsys):
    assert cli.run(["lvalue", "--n", "2", "--X", "200", "--target", "1e-12"]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "precision" and err["x_needed"] > 200


def test_verification_failure_exit_1(capsys):
    code, doc = run_json(capsys, "check-bound", "--n", "1", "--X", "2000", "--target", "0.1", "--C", "1e9")
    assert code == 1 and doc["result"]["pass"] is False


def test_check_bound_pass(capsys):
    code, doc = run_json(capsys, "check-bound", "--n", "1", "--X", "2000", "--target", "0.1")
    assert code == 0 and doc["result"]["ratio"] > 1


def test_lvalue(capsys):
    code, doc = run_json(capsys, "lvalue", "--n", "1", "--X", "20000", "--target", "0.01")
    assert code == 0 and doc["result"]["agree"]
    assert doc["result"]["smoothed"]["error_kind"] == "a-posteriori"


def test_zero_scan_csv(capsys):
    assert cli.run(["zero-scan", "--n", "1", "--X", "2000", "--steps", "10"]) == 0
    text = capsys.readouterr().out
    assert "HEURISTIC" in text
    body = [l for l in text.splitlines() if not l.startswith("#")]
    assert body[0] == "sigma,value,tail_estimate" and len(body) == 11


def test_env_precision_default(monkeypatch, capsys):
    monkeypatch.setenv(cli.PRECISION_ENV, "high:128")
    code, doc = run_json(capsys, "conductor", "--n", "1")
    assert code == 0 and doc["config"]["precision"] == "high:128"


def test_parse_precision():
    assert cli.parse_precision("double") is None
    assert cli.parse_precision("high:300") == 300
    with pytest.raises(cli.UsageError):
        cli.parse_precision("single")


def test_sweep_deterministic(tmp_path):
    out = tmp_path / "sweep.jsonl"
    assert cli.run(["sweep", "--n-max", "4", "--k-list", "12", "16", "-o", str(out)]) == 0
    one = out.read_bytes()
    assert cli.run(["sweep", "--n-max", "4", "--k-list", "12", "16", "--workers", "2", "-o", str(out)]) == 0
    assert out.read_bytes() == one
    lines = one.decode().splitlines()
    assert "config" in json.loads(lines[0])
    keys = [(json.loads(l)["n"], json.loads(l)["k"]) for l in lines[1:]]
    assert keys == sorted(keys) and len(keys) == 8


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "symlfun", "conductor", "--n", "4"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["Q"] == 86112
