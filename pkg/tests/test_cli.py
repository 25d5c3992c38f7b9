import json
import subprocess
import sys

import numpy as np
import pytest

from hybridfit.cli import main
from hybridfit.data import read_json, read_problem
from hybridfit.driver import read_iteration_log
from hybridfit.hypergraph import enumerate_infeasible_bases, lp_lower_bound, solve_cover_exact
from hybridfit.qubo import qubo_from_matrix, read_qubo, write_qubo
from hybridfit.spectral import read_profile_csv


@pytest.fixture
def instance(tmp_path):
    assert main(["generate", "--n-points", "10", "--outlier-ratio", "0.3", "--seed", "3",
                 "--out", str(tmp_path / "gen")]) == 0
    return tmp_path / "gen" / "problem.csv"


def snapshot(folder):
    return {p.name: p.read_bytes() for p in sorted(folder.iterdir())}


def test_generate_outputs(instance):
    folder = instance.parent
    assert sorted(p.name for p in folder.iterdir()) == ["manifest.json", "problem.csv",
                                                         "problem.json", "truth.json"]
    manifest = read_json(folder / "manifest.json")
    assert manifest["command"] == "generate" and manifest["seed"] == 3
    assert set(manifest["versions"]) >= {"hybridfit", "numpy", "scipy"}
    assert read_problem(instance).n_points == 10


def test_solve_and_replay_from_manifest(instance, tmp_path, capsys):
    out1, out2 = tmp_path / "s1", tmp_path / "s2"
    args = ["solve", str(instance), "--variant", "full", "--lambda", "1.0", "--gamma", "2.0",
            "--decay-period", "50", "--lambda-floor", "0.01", "--max-iterations", "30",
            "--out", str(out1)]
    assert main(args) == 0
    line = capsys.readouterr().out.strip().splitlines()[-1]
    assert line.startswith("consensus=") and " bound=" in line and " time=" in line
    assert main(["solve", "--config", str(out1 / "manifest.json"), "--out", str(out2)]) == 0
    assert snapshot(out1) == snapshot(out2)
    rows = read_iteration_log(out1 / "iterations.csv")
    report = read_json(out1 / "report.json")
    assert len(rows) == 30 == len(report["records"])


def test_config_file_and_flag_precedence(instance, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"input": str(instance), "max_iterations": 7, "seed": 3}))
    assert main(["solve", "--config", str(cfg), "--seed", "4", "--out", str(tmp_path / "o")]) == 0
    manifest = read_json(tmp_path / "o" / "manifest.json")
    assert manifest["config"]["max_iterations"] == 7
    assert manifest["config"]["seed"] == 4


def test_exact_backend_bound_matches_oracle(instance, tmp_path):
    out = tmp_path / "ex"
    assert main(["solve", str(instance), "--backend", "exact", "--lambda", "2.0",
                 "--decay-period", "1000", "--max-iterations", "40", "--out", str(out)]) == 0
    report = read_json(out / "report.json")
    p = read_problem(instance)
    E = enumerate_infeasible_bases(p)
    optimum = solve_cover_exact(E)[1]
    assert sum(report["z_best"]) == optimum
    from hybridfit.hypergraph import HyperedgeSet
    lp = lp_lower_bound(HyperedgeSet(p.n_points, report["edges"]))
    assert report["error_bound"] == pytest.approx(optimum - lp)


def test_exit_codes(tmp_path, instance):
    assert main(["solve", str(tmp_path / "missing.csv"), "--out", str(tmp_path)]) == 2
    assert main(["solve", str(instance), "--bogus"]) == 2
    assert main(["solve", str(instance), "--max-iterations", "0", "--out", str(tmp_path)]) == 2
    bad = tmp_path / "cfg.json"
    bad.write_text(json.dumps({"unknown_key": 1}))
    assert main(["solve", str(instance), "--config", str(bad)]) == 2
    assert main(["ransac", "--config", str(instance.parent / "manifest.json")]) == 2
    big = tmp_path / "big"
    assert main(["generate", "--n-points", "30", "--out", str(big)]) == 0
    assert main(["enumerate", str(big / "problem.csv"), "--out", str(big)]) == 2


def test_solver_failure_exit_code(instance, tmp_path, monkeypatch):
    import hybridfit.cli as cli

    def boom(*args, **kwargs):
        raise cli.SimplexError("simplex hit its iteration limit")

    monkeypatch.setattr(cli, "run", boom)
    assert main(["solve", str(instance), "--out", str(tmp_path)]) == 3


def test_ransac_and_enumerate(instance, tmp_path):
    assert main(["ransac", str(instance), "--iterations", "200", "--out", str(tmp_path)]) == 0
    assert main(["enumerate", str(instance), "--out", str(tmp_path)]) == 0
    ransac = read_json(tmp_path / "ransac.json")
    hyper = read_json(tmp_path / "hypergraph.json")
    assert ransac["consensus_size"] <= hyper["max_consensus"]
    assert hyper["lp_bound"] <= hyper["min_cover_size"] + 1e-9


def test_qubo_export(instance, tmp_path):
    assert main(["qubo-export", str(instance), "--lambda", "1.5", "--out", str(tmp_path)]) == 0
    Q, offset = read_qubo(tmp_path / "qubo.txt")
    ising = read_json(tmp_path / "ising.json")
    assert len(ising["biases"]) == Q.shape[0]


def test_spectral_single_qubit_profile(tmp_path):
    toy = tmp_path / "toy.txt"
    write_qubo(qubo_from_matrix([[2.0]]), toy)
    assert main(["spectral-gap", "--qubo", str(toy), "--out", str(tmp_path)]) == 0
    s, g = read_profile_csv(tmp_path / "profile.csv")
    assert g.min() == pytest.approx(np.sqrt(2), abs=1e-6)
    assert s[np.argmin(g)] == pytest.approx(0.5)


def test_spectral_sweep(tmp_path):
    gen = tmp_path / "gen"
    assert main(["generate", "--n-points", "5", "--outlier-ratio", "0.4", "--seed", "4",
                 "--out", str(gen)]) == 0
    out = tmp_path / "sp"
    assert main(["spectral-gap", str(gen / "problem.csv"), "--lambda-points", "1",
                 "--grid-points", "21", "--out", str(out)]) == 0
    lines = (out / "spectral.csv").read_text().splitlines()
    assert lines[0] == "lambda,min_gap" and len(lines) == 2
    assert main(["spectral-gap", str(gen / "problem.csv"), "--lambda-points", "3",
                 "--grid-points", "21", "--out", str(out)]) == 0
    data = np.loadtxt(out / "spectral.csv", delimiter=",", skiprows=1)
    assert data.shape == (3, 2)
    assert data[0, 1] > data[-1, 1]


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "hybridfit.cli", "--version"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "0.1.0"
