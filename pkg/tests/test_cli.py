"""CLI and file outputs (n=4 cases keep these fast)."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import pytest

from blowup.cli import (
    EXIT_BUDGET,
    EXIT_CONFIG,
    RunConfig,
    main,
    run,
    table_sweep,
)
from blowup.certify import BlowupCertificate


def _config(tmp_path: Path, **kw) -> RunConfig:
    base = dict(n=4, m=1, lam="1", initial="cosine_m1",
                out_dir=str(tmp_path), formats=("json", "csv", "surface"))
    base.update(kw)
    return RunConfig(**base)


@pytest.fixture(scope="module")
def run_dir(tmp_path_factory) -> Path:
    d = tmp_path_factory.mktemp("cli")
    assert run(_config(d)) == 0
    return d


def test_artifacts_exist(run_dir):
    assert (run_dir / "n4_m1.certificate.json").exists()
    assert (run_dir / "n4_m1.trajectory.csv").exists()
    assert (run_dir / "n4_m1.surface.csv").exists()


def test_certificate_file_round_trips(run_dir):
    text = (run_dir / "n4_m1.certificate.json").read_text()
    cert = BlowupCertificate.from_json(text)
    assert cert.params.n == 4
    assert cert.to_json() + "\n" == text


def test_trajectory_csv_schema(run_dir):
    with (run_dir / "n4_m1.trajectory.csv").open() as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    assert header == ["tau_lo", "tau_hi", "t_lo", "t_hi", "s_lo", "s_hi",
                      "x_1_lo", "x_1_hi", "x_3_lo", "x_3_hi"]
    cert = BlowupCertificate.from_json(
        (run_dir / "n4_m1.certificate.json").read_text())
    assert len(rows) - 1 == cert.steps_taken
    prev_hi = 0.0
    for row in rows[1:]:
        vals = [float(v) for v in row]
        assert vals[0] == pytest.approx(prev_hi)
        assert vals[0] < vals[1]
        assert vals[2] <= vals[3]
        assert vals[4] <= vals[5]
        prev_hi = vals[1]


def test_surface_csv_schema(run_dir):
    with (run_dir / "n4_m1.surface.csv").open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t_mid", "y_i", "u_i_mid"]
    assert (len(rows) - 1) % 3 == 0  # three interior grid points for n=4
    for row in rows[1:]:
        t, y, u = map(float, row)
        assert 0.0 <= t
        assert 0.0 < y < 1.0
        assert u > 0.0  # only physical (s > 0) steps are exported


def test_invalid_n_exit_code(tmp_path, capsys):
    assert run(_config(tmp_path, n=7)) == EXIT_CONFIG
    err = capsys.readouterr().err
    assert "must be even" in err


def test_invalid_lambda_and_emit(tmp_path):
    assert run(_config(tmp_path, lam="-1")) == EXIT_CONFIG
    assert run(_config(tmp_path, lam="abc")) == EXIT_CONFIG
    assert run(_config(tmp_path, formats=("bogus",))) == EXIT_CONFIG


def test_budget_exit_code(tmp_path):
    assert run(_config(tmp_path, max_steps=1)) == EXIT_BUDGET


def test_sweep_empty_is_config_error():
    assert table_sweep([]) == EXIT_CONFIG


def test_sweep_with_failure_row(tmp_path, capsys):
    ok = _config(tmp_path)
    bad = _config(tmp_path, n=7)
    code = table_sweep([ok, bad])
    out = capsys.readouterr().out
    assert code != 0
    assert "FAILED" in out
    assert out.index("4 |") < out.index("FAILED")  # sorted by n


def test_main_sweep_file(tmp_path, capsys):
    sweep = tmp_path / "sweep.txt"
    sweep.write_text("# two quick rows\nn=4 m=1 initial=cosine_m1\n"
                     "n=4 m=2 initial=cosine_m2\n")
    code = main(["--sweep", str(sweep), "--out-dir", str(tmp_path),
                 "--emit", "json"])
    assert code == 0
    out = capsys.readouterr().out
    assert out.count("\n") >= 3  # header + two rows
    assert (tmp_path / "n4_m1.certificate.json").exists()
    assert (tmp_path / "n4_m2.certificate.json").exists()


def test_main_unknown_sweep_key(tmp_path):
    sweep = tmp_path / "sweep.txt"
    sweep.write_text("n=4 bogus=1\n")
    assert main(["--sweep", str(sweep)]) == EXIT_CONFIG


def test_main_missing_sweep_file(tmp_path):
    assert main(["--sweep", str(tmp_path / "nope.txt")]) == EXIT_CONFIG


def test_initial_from_file(tmp_path):
    data = tmp_path / "u0.txt"
    data.write_text("1.0\n4.0\n1.0\n")
    config = _config(tmp_path, initial=f"file:{data}", formats=("json",))
    assert run(config) == 0


def test_png_emission(tmp_path):
    config = _config(tmp_path, formats=("json", "png"))
    assert run(config) == 0
    assert (tmp_path / "n4_m1.surface.png").stat().st_size > 0
    assert (tmp_path / "n4_m1.decay.png").stat().st_size > 0
