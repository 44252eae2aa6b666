import csv
import io
import json

import pytest
from click.testing import CliRunner

from qwstat.cli import main


@pytest.fixture
def run():
    runner = CliRunner()

    def _run(*args, env=None):
        return runner.invoke(main, list(args), env=env, catch_exceptions=False)

    return _run


def rows(text):
    return {int(r["x"]): r for r in csv.DictReader(io.StringIO(text)) if not r["x"].startswith("#")}


def test_stationary_hadamard(run):
    r = run("stationary", "--coin", "hadamard", "--k", "2", "--A", "0,0", "--B", "1,0", "--window", "-32:32")
    assert r.exit_code == 0
    m = rows(r.output)
    assert float(m[2]["mu"]) == pytest.approx(6, abs=1e-12)
    assert float(m[0]["mu"]) == pytest.approx(2, abs=1e-12)


def test_stationary_out_dir(run, tmp_path):
    r = run("stationary", "--k", "1", "--window", "-5:5", "--out-dir", str(tmp_path))
    assert r.exit_code == 0
    assert {p.name for p in tmp_path.iterdir()} >= {"amplitudes.csv", "measure.csv", "report.json"}
    assert json.loads((tmp_path / "report.json").read_text())["passed"] is True


def test_counterexample_table(run):
    r = run("counterexample", "--which", "unbounded", "--window", "-10:10")
    assert r.exit_code == 0
    t = rows(r.output)
    assert float(t[0]["mu0"]) == 4 and float(t[0]["mu2"]) == 8
    assert t[-10]["mu2"] == ""


def test_counterexample_json(run):
    r = run("counterexample", "--which", "bounded", "--format", "json")
    data = json.loads(r.output)
    assert data["which"] == "bounded" and len(data["rows"]) == 21


def test_verify_u_theta(run):
    r = run("verify", "--coin", "u-theta:0.7853981633974483", "--k", "1")
    assert r.exit_code == 0
    rep = json.loads(r.output)
    assert max(rep["identities"].values()) < 1e-12 and rep["passed"]


def test_verify_azero(run, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"eta": 0.2, "delta": [0, 1], "sign": "-", "alpha": {"0": [2, 0]}}))
    r = run("verify", "--family", "azero", "--spec", str(spec), "--n-max", "20")
    assert r.exit_code == 0, r.output
    assert json.loads(r.output)["membership_level"] == 20


def test_verify_failure_exit_1(run):
    r = run("verify", "--k", "1", "--B", "1,0", "--tol", "1e-300")
    assert r.exit_code == 1
    assert json.loads(r.output)["passed"] is False


def test_config_error_exit_2(run):
    r = run("stationary", "--coin", "nonsense")
    assert r.exit_code == 2
    r = run("stationary", "--window", "3:1")
    assert r.exit_code == 2


def test_not_unitary_exit_2(run, tmp_path):
    p = tmp_path / "coin.json"
    p.write_text(json.dumps({"a": [1, 0], "b": [0, 0], "c": [0, 0], "d": [0, 0]}))
    assert run("stationary", "--coin", str(p)).exit_code == 2


def test_precondition_exit_3(run):
    r = run("stationary", "--coin", "identity", "--family", "full")
    assert r.exit_code == 3
    r = run("stationary", "--k", "1", "--A", "0,0", "--B", "0,0")
    assert r.exit_code == 3


def test_evolve_delta(run):
    r = run("evolve", "--family", "delta", "--phi", "1,0;0,0", "--window", "-2:2", "--n", "2", "--format", "json")
    assert r.exit_code == 0, r.output
    data = json.loads(r.output)["2"]
    assert data["x"] == [-2, -1, 0, 1, 2]
    assert data["mu"] == pytest.approx([0.25, 0, 0.5, 0, 0.25], abs=1e-15)


def test_certificate(run):
    r = run("certificate", "--which", "unbounded")
    data = json.loads(r.output)
    assert data["verdict"] == "non-stationary" and data["witness"] == 0
    r = run("certificate", "--which", "random-uniform", "--seed", "3")
    assert json.loads(r.output)["verdict"] == "uniform"


def test_certificate_needs_one_source(run):
    assert run("certificate").exit_code == 2


def test_sweep_deterministic_and_threaded(run):
    args = ("sweep", "--random-coins", "3", "--seed", "11", "--n-max", "5")
    a = run(*args).output
    b = run(*args, "--jobs", "4").output
    assert a == b
    assert "# summary: 24 points, 0 failed" in a


def test_sweep_qw_seed_overrides(run):
    args = ("sweep", "--random-coins", "2", "--k", "1", "--n-max", "3")
    a = run(*args, "--seed", "1", env={"QW_SEED": "9"}).output
    b = run(*args, "--seed", "2", env={"QW_SEED": "9"}).output
    c = run(*args, "--seed", "9").output
    assert a == b == c


def test_sweep_failure_names_point(run):
    r = run("sweep", "--theta", "0.5", "--k", "2", "--tol", "1e-300", "--n-max", "5")
    assert r.exit_code == 1
    assert "first failing point index=0" in r.output
