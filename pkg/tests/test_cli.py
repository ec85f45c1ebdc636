"""Command-line interface: outputs, manifests, replay, exit codes."""

import json

import numpy as np
import pytest

from nshmc.cli import cmd_exp1, cmd_exp2, cmd_exp3, cmd_replay, cmd_sample, main
from nshmc.pgm import pgm_read, pgm_write


def _read_csv(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


def test_exp1_outputs(tmp_path):
    res = cmd_exp1(p=1.0, lam=1.0, iterations=400, seed=0, out_dir=tmp_path)
    header, rows = _read_csv(tmp_path / "mse_curve.csv")
    assert header == ["iteration", "nshmc2", "rwmh", "indmh"]
    ticks = [int(r[0]) for r in rows]
    assert ticks == sorted(ticks) and ticks[-1] == 400
    assert all(float(v) >= 0.0 for r in rows for v in r[1:])

    header, rows = _read_csv(tmp_path / "acf.csv")
    assert header == ["lag", "nshmc2", "rwmh", "indmh"]
    assert len(rows) == 51
    assert rows[0][0] == "0" and float(rows[0][1]) == 1.0

    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["command"] == "exp1"
    assert manifest["params"]["iterations"] == 400
    assert manifest["params"]["burn_in"] == 100
    assert manifest["outputs"] == ["mse_curve.csv", "acf.csv"]
    assert set(res["final_mse"]) == {"nshmc2", "rwmh", "indmh"}


def test_exp1_hmc_decorrelates_faster_than_rwmh(tmp_path):
    res = cmd_exp1(p=1.5, lam=1.0, iterations=6000, seed=0, out_dir=tmp_path)
    ns = res["acf"]["nshmc2"][1:6]
    rw = res["acf"]["rwmh"][1:6]
    assert np.all(ns < rw)


def test_exp2_outputs(tmp_path):
    res = cmd_exp2(
        dim=2, p=1.0, lam=1.0, iterations=500, seed=0, out_dir=tmp_path
    )
    header, rows = _read_csv(tmp_path / "mse_curve.csv")
    assert header == ["iteration", "nshmc2", "rwmh", "direct_floor"]
    assert int(rows[-1][0]) == 500

    header, rows = _read_csv(tmp_path / "convergence.csv")
    assert header == ["sampler", "iterations_to_threshold", "reached", "threshold_mse"]
    assert [r[0] for r in rows] == ["nshmc2", "rwmh"]
    for r in rows:
        assert 1 <= int(r[1]) <= 500
        assert r[2] in ("0", "1")
        assert float(r[3]) > 0.0
    assert set(res["thresholds"]) == {"nshmc2", "rwmh"}


def test_exp3_outputs(tmp_path):
    res = cmd_exp3(
        input_pgm=None,
        noise_var=40.0,
        iterations=150,
        burn_in=75,
        seed=0,
        out_dir=tmp_path,
    )
    assert pgm_read(tmp_path / "noisy.pgm").shape == (64, 64)
    assert pgm_read(tmp_path / "denoised.pgm").shape == (64, 64)

    header, rows = _read_csv(tmp_path / "metrics.csv")
    assert header == ["image", "snr_db", "ssim"]
    assert [r[0] for r in rows] == ["noisy", "denoised"]
    for r in rows:
        float(r[1])
        assert 0.0 <= float(r[2]) <= 1.0

    header, rows = _read_csv(tmp_path / "chain.csv")
    assert header == ["iteration", "sigma2", "lambda", "accepted"]
    assert len(rows) == 150
    # The accepted column is the per-sweep fraction of accepted
    # coefficients, not a 0/1 flag.
    fracs = [float(r[3]) for r in rows]
    assert all(0.0 <= f <= 1.0 for f in fracs)
    assert any(0.0 < f < 1.0 for f in fracs)
    assert res["metrics"]["denoised"][0] > res["metrics"]["noisy"][0]


def test_exp3_reads_pgm_input(tmp_path):
    rng = np.random.default_rng(0)
    img = rng.integers(0, 200, size=(32, 32)).astype(float)
    src = tmp_path / "input.pgm"
    pgm_write(img, src)
    out = tmp_path / "run"
    cmd_exp3(
        input_pgm=src,
        noise_var=10.0,
        iterations=20,
        burn_in=10,
        seed=0,
        out_dir=out,
    )
    assert (out / "denoised.pgm").exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["params"]["input_pgm"] == str(src)


def test_sample_outputs(tmp_path):
    res = cmd_sample(
        target="gg:p=1,gamma=1",
        sampler="nshmc2:eps=0.25,lf=10",
        iterations=400,
        seed=0,
        out_dir=tmp_path,
        burn_in=100,
    )
    header, rows = _read_csv(tmp_path / "chain.csv")
    assert header == ["iteration", "x0", "accepted"]
    assert len(rows) == 300
    assert int(rows[0][0]) == 100 and int(rows[-1][0]) == 399
    assert set(r[2] for r in rows) <= {"0", "1"}
    assert 0.0 < res["record"].acceptance_rate < 1.0


def test_sample_multivariate_quadl1(tmp_path):
    cmd_sample(
        target="quadl1:a=2,b=1",
        sampler="rwmh:std=0.8",
        iterations=50,
        seed=1,
        out_dir=tmp_path,
        dim=3,
    )
    header, rows = _read_csv(tmp_path / "chain.csv")
    assert header == ["iteration", "x0", "x1", "x2", "accepted"]
    assert len(rows) == 50


def test_replay_reproduces_outputs_bitwise(tmp_path):
    a = tmp_path / "a"
    cmd_exp1(p=1.0, lam=1.0, iterations=300, seed=7, out_dir=a)
    b = tmp_path / "b"
    cmd_replay(a / "manifest.json", out_dir=b)
    for name in ("mse_curve.csv", "acf.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()

    c = tmp_path / "c"
    cmd_sample(
        target="gg:p=1.5,gamma=2",
        sampler="indmh:std=2",
        iterations=200,
        seed=3,
        out_dir=c,
    )
    d = tmp_path / "d"
    cmd_replay(c / "manifest.json", out_dir=d)
    assert (c / "chain.csv").read_bytes() == (d / "chain.csv").read_bytes()


def test_replay_rejects_bad_manifests(tmp_path):
    bogus = tmp_path / "manifest.json"
    bogus.write_text(json.dumps({"command": "bogus", "params": {}}))
    assert main(["replay", str(bogus)]) == 2
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert main(["replay", str(broken)]) == 3


def test_main_success_exit_code(tmp_path):
    assert main(["sample", "-n", "50", "--out-dir", str(tmp_path)]) == 0


def test_main_usage_errors_exit_2(tmp_path):
    d = str(tmp_path)
    assert main(["exp2", "--dim", "5", "--out-dir", d]) == 2
    assert main(["exp1", "--p", "0.5", "--out-dir", d]) == 2
    assert main(["exp1", "-n", "400", "--max-lag", "400", "--out-dir", d]) == 2
    assert main(["exp1", "-n", "100", "--burn-in", "100", "--out-dir", d]) == 2
    assert main(["sample", "--sampler", "hmcx", "--out-dir", d]) == 2
    assert main(["sample", "--target", "gg:p=abc", "--out-dir", d]) == 2
    assert main(["sample", "--sampler", "rwmh:std=-1", "--out-dir", d]) == 2


def test_main_file_errors_exit_3(tmp_path):
    d = str(tmp_path)
    missing = str(tmp_path / "nope.pgm")
    assert main(["exp3", "--input-pgm", missing, "-n", "10", "--burn-in", "0",
                 "--out-dir", d]) == 3
    garbage = tmp_path / "garbage.pgm"
    garbage.write_bytes(b"P6 2 2 255 \x00\x00\x00\x00")
    assert main(["exp3", "--input-pgm", str(garbage), "-n", "10", "--burn-in", "0",
                 "--out-dir", d]) == 3


def test_main_numeric_failure_exit_4(tmp_path):
    # A step size of 1e300 overflows every trajectory, the chain never
    # moves, and the lag-1 autocorrelation of the constant chain raises.
    code = main([
        "sample",
        "--sampler", "nshmc2:eps=1e300,lf=10",
        "-n", "50",
        "--out-dir", str(tmp_path),
    ])
    assert code == 4


def test_exp3_rejects_non_power_of_two_image(tmp_path):
    img = np.zeros((6, 6))
    src = tmp_path / "odd.pgm"
    pgm_write(img, src)
    assert main(["exp3", "--input-pgm", str(src), "-n", "10", "--burn-in", "0",
                 "--out-dir", str(tmp_path)]) == 2
