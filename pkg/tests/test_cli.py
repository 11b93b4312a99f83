import json
import os
import stat

import numpy as np
import pytest

from concdim.cli import main


def run_cli(*args) -> int:
    return main(list(args))


def test_gen_writes_points_and_manifest(tmp_path):
    out = tmp_path / "cube"
    assert run_cli("gen", "--family", "hamming_cube", "--param", "d=3",
                   "--out", str(out)) == 0
    rows = (out / "points.csv").read_text().strip().splitlines()
    assert len(rows) == 9
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["generator"]["family"] == "hamming_cube"
    assert manifest["rng_algorithm"] == "numpy PCG64"


def test_gen_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert run_cli("gen", "--family", "gaussian_cloud", "--param", "d=3",
                       "--param", "sigma=0.5", "--param", "n=40",
                       "--seed", "7", "--out", str(out)) == 0
    assert (a / "points.csv").read_bytes() == (b / "points.csv").read_bytes()


def test_alpha_exact_on_csv(tmp_path):
    points = tmp_path / "pts.csv"
    points.write_text("x0\n0.0\n1.0\n")
    out = tmp_path / "alpha"
    assert run_cli("alpha", "--points", str(points), "--eps", "0.5",
                   "--out", str(out)) == 0
    payload = json.loads((out / "alpha.json").read_text())
    assert payload["alpha_at_eps"]["alpha"] == 0.5
    assert payload["profile"]["mode"] == "exact"


def test_sep_exact_on_two_point_csv(tmp_path):
    dist = tmp_path / "d.csv"
    dist.write_text("0,1\n1,0\n")
    out = tmp_path / "sep"
    assert run_cli("sep", "--dist", str(dist), "--kappa", "0.25",
                   "--out", str(out)) == 0
    payload = json.loads((out / "sep.json").read_text())
    assert payload["sep_at_kappa"]["sep"] == 1.0
    assert payload["profile"]["mode"] == "exact"


def test_dims_singleton_reports_infinite(tmp_path):
    points = tmp_path / "pt.csv"
    points.write_text("x0\n0.0\n")
    out = tmp_path / "dims"
    assert run_cli("dims", "--points", str(points), "--out", str(out)) == 0
    payload = json.loads((out / "dimensions.json").read_text())
    rep = payload["report"]
    assert rep["dim_concentration"] == "inf"
    assert rep["dim_separation"] == "inf"
    assert rep["dim_chavez"] == "inf"


def test_emd_self_is_zero(tmp_path):
    dist = tmp_path / "d.csv"
    dist.write_text("0,1\n1,0\n")
    mu = tmp_path / "mu.csv"
    mu.write_text("0.5\n0.5\n")
    out = tmp_path / "emd"
    assert run_cli("emd", "--space", str(dist), "--mu", str(mu),
                   "--nu", str(mu), "--out", str(out)) == 0
    payload = json.loads((out / "emd.json").read_text())
    assert payload["cost"] == 0.0


def test_net_and_bound_pipeline(tmp_path):
    points = tmp_path / "pts.csv"
    rng = np.random.default_rng(0)
    lines = ["x0,x1"] + [f"{x},{y}" for x, y in rng.random((40, 2))]
    points.write_text("\n".join(lines) + "\n")
    out = tmp_path / "net"
    grid = [str(v) for v in np.geomspace(4e-4, 2.0, 40)]
    assert run_cli("net", "--points", str(points), "--grid", *grid,
                   "--out", str(out)) == 0
    out2 = tmp_path / "bound"
    assert run_cli("bound", "--eps", "0.2", "--delta", "1e-3",
                   "--cover", str(out / "covering.csv"),
                   "--out", str(out2)) == 0
    payload = json.loads((out2 / "bound.json").read_text())
    assert payload["sample_size"] >= 1


def test_sep_analytic_subcommand(tmp_path):
    out = tmp_path / "h"
    assert run_cli("sep", "--analytic-d", "3", "--kappa", "0.5",
                   "--out", str(out)) == 0
    payload = json.loads((out / "sep.json").read_text())
    assert payload["sep"] == pytest.approx(1 / 3)


def test_exit_code_input_error(tmp_path):
    missing = tmp_path / "nope.csv"
    assert run_cli("alpha", "--points", str(missing),
                   "--out", str(tmp_path)) == 2


def test_exit_code_parse_error_names_line(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("x0\n0.0\nnot-a-number\n")
    assert run_cli("alpha", "--points", str(bad), "--out", str(tmp_path)) == 2
    assert "line 3" in capsys.readouterr().err


def test_exit_code_resource_limit(tmp_path):
    assert run_cli("gen", "--family", "hamming_cube", "--param", "d=25",
                   "--out", str(tmp_path)) == 3


def test_exit_code_exact_mode_over_limit(tmp_path):
    points = tmp_path / "pts.csv"
    rng = np.random.default_rng(1)
    lines = ["x0"] + [repr(float(v)) for v in rng.random(30)]
    points.write_text("\n".join(lines) + "\n")
    assert run_cli("alpha", "--points", str(points), "--mode", "exact",
                   "--out", str(tmp_path)) == 3


def test_exit_code_unknown_experiment(tmp_path):
    assert run_cli("experiment", "--name", "nope", "--out", str(tmp_path)) == 2


@pytest.mark.skipif(os.geteuid() == 0, reason="root bypasses permissions")
def test_exit_code_unwritable_output(tmp_path):
    blocked = tmp_path / "blocked"
    blocked.mkdir()
    blocked.chmod(stat.S_IRUSR | stat.S_IXUSR)
    try:
        assert run_cli("gen", "--family", "hamming_cube", "--param", "d=2",
                       "--out", str(blocked / "sub")) == 5
    finally:
        blocked.chmod(stat.S_IRWXU)


def test_exit_code_unwritable_output_file_collision(tmp_path):
    # a regular file where the output directory should be is unwritable
    target = tmp_path / "occupied"
    target.write_text("")
    assert run_cli("gen", "--family", "hamming_cube", "--param", "d=2",
                   "--out", str(target)) == 5


def test_experiment_cli_runs_small(tmp_path):
    out = tmp_path / "exp"
    assert run_cli("experiment", "--name", "hamming_dimension",
                   "--param", "d_values=11,13,15", "--out", str(out)) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["summary"]["monotone_increasing"] is True
    assert (out / "hamming_sep_dimension.csv").exists()

def test_exit_code_experiment_resource_limit(tmp_path):
    assert run_cli("experiment", "--name", "noise_instability",
                   "--param", "n=200000", "--out", str(tmp_path)) == 3
