import csv
import hashlib
import json
from pathlib import Path

import numpy as np
import pytest

import dtcmorph.cli as cli
from dtcmorph.errors import ValidationError


def run_cli(args):
    return cli.main(args)


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def common_args(out, extra=()):
    return [*extra, "--n-sites", "2", "--seed", "7", "--out", str(out)]


def test_spectrum_toy_run(tmp_path):
    out = tmp_path / "spec"
    code = run_cli(["spectrum", "--lambdas", "0.0,0.5", *common_args(out)])
    assert code == 0
    header, rows = read_csv(out / "spectrum.csv")
    assert header == ["lambda", "seed", "alpha", "quasienergy", "re_eigenvalue", "im_eigenvalue"]
    assert len(rows) == 2 * 4  # two lambdas, D = 4 levels each
    for row in rows:
        modulus = float(row[4]) ** 2 + float(row[5]) ** 2
        assert modulus == pytest.approx(1.0, abs=1e-10)
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "spectrum"
    digest = hashlib.sha256((out / "spectrum.csv").read_bytes()).hexdigest()
    assert manifest["files"][0]["sha256"] == digest


def test_levels_toy_run(tmp_path):
    out = tmp_path / "lev"
    code = run_cli(
        ["levels", "--lambdas", "0.5", "--realizations", "3", "--bins", "5", *common_args(out)]
    )
    assert code == 0
    header, rows = read_csv(out / "levels_histogram.csv")
    assert len(rows) == 5
    _, summary = read_csv(out / "levels_summary.csv")
    assert len(summary) == 1
    assert float(summary[0][1]) == 3 * 2  # three cells, D-2 = 2 ratios each
    manifest = json.loads((out / "manifest.json").read_text())
    assert "degenerate_gaps" in manifest


def test_fractal_toy_run(tmp_path):
    out = tmp_path / "frac"
    code = run_cli(
        ["fractal", "--lambdas", "0.2,0.8", "--realizations", "2", *common_args(out)]
    )
    assert code == 0
    _, states = read_csv(out / "fractal_states.csv")
    assert len(states) == 2 * 2 * 4
    _, means = read_csv(out / "fractal_mean.csv")
    assert len(means) == 2


def test_dynamics_toy_run_recrystallized_peak(tmp_path):
    out = tmp_path / "dyn"
    code = run_cli(
        ["dynamics", "--lambdas", "0.0,1.0", "--periods", "8", *common_args(out)]
    )
    assert code == 0
    _, power = read_csv(out / "dynamics_power.csv")
    by_bin = {(row[0], int(row[1])): float(row[3]) for row in power}
    # at lam=1 all weight sits in the half-frequency bin k = n/2
    assert by_bin[("1.0", 4)] == pytest.approx(1.0, abs=1e-9)
    for k in range(8):
        if k != 4:
            assert by_bin[("1.0", k)] < 1e-9
    _, series = read_csv(out / "dynamics_series.csv")
    assert len(series) == 2 * 9  # m = 0..8 for each lambda
    _, fid = read_csv(out / "fidelity_4t.csv")
    assert len(fid) == 4 * 2
    fid4 = {(row[0], row[1]): float(row[2]) for row in fid}
    for config in range(4):
        assert fid4[(str(config), "0.0")] == pytest.approx(1.0, abs=1e-12)


def test_walk_toy_run_support(tmp_path):
    out = tmp_path / "walk"
    code = run_cli(
        ["walk", "--lambdas", "0.0,1.0", "--periods", "12", *common_args(out)]
    )
    assert code == 0
    header, rows = read_csv(out / "walk_000.csv")
    assert header[:2] == ["lambda", "m"]
    assert len(header) == 2 + 4
    assert len(rows) == 13
    for row in rows:
        assert sum(float(v) for v in row[2:]) == pytest.approx(1.0, abs=1e-9)
    _, support = read_csv(out / "walk_support.csv")
    counts = {row[0]: int(row[2]) for row in support}
    assert counts["0.0"] == 4
    assert counts["1.0"] == 2


def test_heff_toy_run(tmp_path):
    out = tmp_path / "heff"
    code = run_cli(["heff", "--lambdas", "0.0,0.5", *common_args(out)])
    assert code == 0
    header, rows = read_csv(out / "heff_000.csv")
    assert len(rows) == 4 and len(header) == 2 + 4
    _, sparsity = read_csv(out / "heff_sparsity.csv")
    assert len(sparsity) == 2


def test_sweep_toy_run_and_worker_determinism(tmp_path):
    args = ["sweep", "--lambdas", "0.3,0.9", "--realizations", "2", "--n-sites", "4",
            "--seed", "11"]
    out1 = tmp_path / "w1"
    out2 = tmp_path / "w2"
    assert run_cli([*args, "--workers", "1", "--out", str(out1)]) == 0
    assert run_cli([*args, "--workers", "2", "--out", str(out2)]) == 0
    for name in ("sweep_cells.csv", "sweep_mean_ratio.csv", "sweep_fractal.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_repeat_run_byte_identical(tmp_path):
    outs = []
    for tag in ("a", "b"):
        out = tmp_path / tag
        assert run_cli(["spectrum", "--lambdas", "0.25,0.75", *common_args(out)]) == 0
        outs.append(out)
    assert (outs[0] / "spectrum.csv").read_bytes() == (outs[1] / "spectrum.csv").read_bytes()


def test_config_file_drives_run(tmp_path):
    config = {
        "n_sites": 2,
        "lambdas": [0.0, 1.0],
        "realizations": 1,
        "periods": 8,
        "master_seed": 3,
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(config), encoding="utf-8")
    out = tmp_path / "run"
    assert run_cli(["spectrum", "--config", str(cfg_path), "--out", str(out)]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["master_seed"] == 3
    assert manifest["config"]["lambdas"] == [0.0, 1.0]


@pytest.mark.parametrize(
    "args",
    [
        ["spectrum", "--lambdas", "0.2,1.5"],
        ["spectrum", "--n-sites", "3"],
        ["spectrum", "--realizations", "0"],
        ["walk", "--initial-config", "99", "--n-sites", "2"],
    ],
)
def test_bad_flags_exit_two(tmp_path, args):
    assert run_cli([*args, "--out", str(tmp_path / "x")]) == 2


def test_unknown_config_key_exits_two(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"sites": 4}), encoding="utf-8")
    assert run_cli(["spectrum", "--config", str(cfg_path)]) == 2


def test_missing_config_file_exits_two(tmp_path):
    assert run_cli(["spectrum", "--config", str(tmp_path / "nope.json")]) == 2


def test_validation_failure_exits_three(tmp_path, monkeypatch):
    def broken(cfg, out_dir):
        raise ValidationError("forced")

    monkeypatch.setitem(cli._HANDLERS, "spectrum", broken)
    assert run_cli(["spectrum", "--n-sites", "2", "--out", str(tmp_path / "v")]) == 3
