import json

import numpy as np
import pytest

from heavinet.cli import main
from heavinet import generate_symmetric_connectivity
from heavinet.serialization import load_matrix_csv, load_schedule, save_matrix_csv


NET = {
    "n": 5,
    "T": 60.0,
    "s0": {"kind": "uniform", "seed": 7},
    "inputs": 0.1,
    "connectivity": {"kind": "symmetric"},
}


@pytest.fixture()
def workdir(tmp_path):
    cfg = tmp_path / "net.json"
    cfg.write_text(json.dumps(NET))
    w = tmp_path / "w.csv"
    save_matrix_csv(w, generate_symmetric_connectivity(5).w)
    return tmp_path, cfg, w


def test_simulate_then_invert_roundtrip(workdir):
    tmp, cfg, w_path = workdir
    sched = tmp / "sched.json"
    assert main([
        "simulate", "--config", str(cfg), "--method", "exact",
        "--out-schedule", str(sched),
    ]) == 0
    schedule, pairing = load_schedule(sched)
    assert schedule.n == 5 and pairing is None
    assert schedule.counts().min() >= 1

    w_inv = tmp / "w_inv.csv"
    report = tmp / "report.json"
    assert main([
        "invert", "--schedule", str(sched), "--config", str(cfg),
        "--selection", "fixed:5", "--out-connectivity", str(w_inv),
        "--out-report", str(report),
    ]) == 0
    got = load_matrix_csv(w_inv)
    true_w = generate_symmetric_connectivity(5).w
    assert np.linalg.norm(got - true_w) / np.linalg.norm(true_w) <= 1e-6
    payload = json.loads(report.read_text())
    assert payload["method"] == "fixed"
    assert payload["unrecoverable"] == []


def test_simulate_writes_trajectory(workdir):
    tmp, cfg, _ = workdir
    sched = tmp / "sched.json"
    traj = tmp / "traj.csv"
    assert main([
        "simulate", "--config", str(cfg), "--method", "euler",
        "--out-schedule", str(sched),
        "--out-trajectory", str(traj), "--sample-dt", "0.5",
    ]) == 0
    lines = traj.read_text().strip().splitlines()
    assert lines[0] == "t,s0,s1,s2,s3,s4"
    assert len(lines) == 1 + 121  # t = 0, 0.5, ..., 60
    first = [float(x) for x in lines[1].split(",")]
    assert first[0] == 0.0
    assert all(0.0 <= v < 1.0 for v in first[1:])  # s0 drawn from [0,1)


def test_noise_apply_then_adjusted_inversion(workdir):
    tmp, cfg, _ = workdir
    sched = tmp / "sched.json"
    main(["simulate", "--config", str(cfg), "--method", "exact",
          "--out-schedule", str(sched)])
    noisy = tmp / "noisy.json"
    assert main([
        "noise-apply", "--schedule", str(sched), "--level", "0.02",
        "--seed", "3", "--out", str(noisy),
    ]) == 0
    loaded, pairing = load_schedule(noisy)
    assert pairing is not None  # provenance travels with the noisy file

    w_inv = tmp / "w_inv.csv"
    assert main([
        "invert", "--schedule", str(noisy), "--config", str(cfg),
        "--selection", "morozov-a", "--clean-schedule", str(sched),
        "--out-connectivity", str(w_inv),
    ]) == 0
    got = load_matrix_csv(w_inv)
    true_w = generate_symmetric_connectivity(5).w
    assert np.linalg.norm(got - true_w) / np.linalg.norm(true_w) < 1.0


def test_invert_rhs_noise_and_oracle(workdir):
    tmp, cfg, w_path = workdir
    sched = tmp / "sched.json"
    main(["simulate", "--config", str(cfg), "--method", "exact",
          "--out-schedule", str(sched)])
    w_inv = tmp / "w_inv.csv"
    report = tmp / "report.json"
    assert main([
        "invert", "--schedule", str(sched), "--config", str(cfg),
        "--selection", "morozov-b", "--noise-level", "0.05",
        "--noise-seed", "11", "--out-connectivity", str(w_inv),
        "--out-report", str(report),
    ]) == 0
    assert json.loads(report.read_text())["method"] == "morozov_b"

    assert main([
        "invert", "--schedule", str(sched), "--config", str(cfg),
        "--selection", "oracle", "--true-connectivity", str(w_path),
        "--out-connectivity", str(w_inv), "--out-report", str(report),
    ]) == 0
    payload = json.loads(report.read_text())
    assert "oracle_benchmark_only" in payload["flags"]
    assert payload["oracle_kappa"] is not None


def test_diagnose_outputs(workdir):
    tmp, cfg, _ = workdir
    sched = tmp / "sched.json"
    main(["simulate", "--config", str(cfg), "--method", "exact",
          "--out-schedule", str(sched)])
    out = tmp / "diag.json"
    spectra = tmp / "spectra.csv"
    assert main([
        "diagnose", "--schedule", str(sched), "--config", str(cfg),
        "--out", str(out), "--spectra-csv", str(spectra),
    ]) == 0
    payload = json.loads(out.read_text())
    assert payload["classification"] in ("severe", "mild", "inconclusive")
    assert set(payload["neurons"]) == {"0", "1", "2", "3", "4"}
    one = payload["neurons"]["0"]["spectrum"]
    assert one["sigma1_bound_ok"] is True
    assert spectra.read_text().startswith("neuron,m,sigma\n")


def test_run_experiment_config(workdir):
    tmp, cfg, _ = workdir
    exp = tmp / "exp.json"
    exp.write_text(json.dumps({
        "network": {"n": 5, "T": 60.0, "s0": {"kind": "uniform", "seed": 7}},
        "connectivity": {"kind": "symmetric"},
        "selection": {"method": "fixed", "kappa": 5},
        "method": "exact",
        "replicates": 1,
    }))
    outdir = tmp / "out"
    assert main(["run", "--config", str(exp), "--out", str(outdir)]) == 0
    payload = json.loads((outdir / "report.json").read_text())
    assert payload["results"]["mean_rel_error"] <= 1e-6


def test_reproduce_single_cheap_group(tmp_path):
    out = tmp_path / "tab"
    assert main([
        "reproduce", "--out", str(out), "--groups", "sym-20",
        "--replicates", "2",
    ]) == 0
    disk = json.loads((out / "tables.json").read_text())
    assert len(disk["cells"]) == 6
    assert disk["groups"]["sym-20"]["state_seed"] == 15


def test_global_seed_feeds_noise_apply(workdir):
    tmp, cfg, _ = workdir
    sched = tmp / "sched.json"
    main(["simulate", "--config", str(cfg), "--method", "exact",
          "--out-schedule", str(sched)])
    a, b, c = tmp / "a.json", tmp / "b.json", tmp / "c.json"
    assert main(["--seed", "3", "noise-apply", "--schedule", str(sched),
                 "--level", "0.02", "--out", str(a)]) == 0
    assert main(["noise-apply", "--schedule", str(sched), "--level", "0.02",
                 "--seed", "3", "--out", str(b)]) == 0
    assert a.read_text() == b.read_text()
    # no seed anywhere is a config error
    assert main(["noise-apply", "--schedule", str(sched), "--level", "0.02",
                 "--out", str(c)]) == 2


def test_threads_do_not_change_results(tmp_path):
    serial = tmp_path / "serial"
    pooled = tmp_path / "pooled"
    assert main(["reproduce", "--out", str(serial), "--groups", "sym-20",
                 "--replicates", "4"]) == 0
    assert main(["--threads", "4", "reproduce", "--out", str(pooled),
                 "--groups", "sym-20", "--replicates", "4"]) == 0
    assert (serial / "tables.json").read_text() == (pooled / "tables.json").read_text()


def test_cli_error_exits(workdir):
    tmp, cfg, _ = workdir
    # missing file -> config error -> exit 2
    assert main([
        "invert", "--schedule", str(tmp / "nope.json"), "--config", str(cfg),
        "--selection", "fixed:5", "--out-connectivity", str(tmp / "w.csv"),
    ]) == 2
    # unknown selection name
    sched = tmp / "sched.json"
    main(["simulate", "--config", str(cfg), "--method", "exact",
          "--out-schedule", str(sched)])
    assert main([
        "invert", "--schedule", str(sched), "--config", str(cfg),
        "--selection", "ridge", "--out-connectivity", str(tmp / "w.csv"),
    ]) == 2
    # morozov-a without a clean schedule
    assert main([
        "invert", "--schedule", str(sched), "--config", str(cfg),
        "--selection", "morozov-a", "--out-connectivity", str(tmp / "w.csv"),
    ]) == 2
    # argparse failure (unknown subcommand) also maps to 2
    assert main(["transmogrify"]) == 2
