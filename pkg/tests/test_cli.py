import filecmp
import os
import subprocess
import sys

import pytest

CONFIG_SMALL = """
[scenario]
n_antennas = 12
n_users = 3

[aco]
n_iterations = 3
n_candidates = 4

[sweep]
parameter = transmit_power_db
values = 10, 20
"""

CONFIG_BIG = """
[scenario]
n_antennas = 100
n_users = 16
"""


def run_cli(args, cwd):
    return subprocess.run(
        [sys.executable, "-m", "beamsel.cli", *args],
        capture_output=True, text=True, cwd=cwd, env=dict(os.environ),
    )


def read_rows(path):
    lines = path.read_text().strip().splitlines()
    return lines[0], [l.split(",") for l in lines[1:]]


def test_run_with_config(tmp_path):
    cfg = tmp_path / "exp.ini"
    cfg.write_text(CONFIG_SMALL)
    out = tmp_path / "rows.csv"
    proc = run_cli(["run", "--config", str(cfg), "--trials", "4",
                    "--seed", "3", "--out", str(out)], tmp_path)
    assert proc.returncode == 0, proc.stderr
    header, rows = read_rows(out)
    assert header.startswith("trial,scheme")
    assert len(rows) == 4 * 4 * 2  # trials * schemes * sweep points
    assert {r[1] for r in rows} == {"mm1", "ia", "exhaustive", "aco"}


def test_run_scheme_subset_and_defaults(tmp_path):
    out = tmp_path / "subset.csv"
    proc = run_cli(["run", "--schemes", "mm1,ia", "--trials", "2",
                    "--out", str(out)], tmp_path)
    assert proc.returncode == 0, proc.stderr
    _, rows = read_rows(out)
    assert {r[1] for r in rows} == {"mm1", "ia"}
    assert len(rows) == 2 * 2


def test_run_rejects_unknown_scheme(tmp_path):
    proc = run_cli(["run", "--schemes", "mm1,zf",
                    "--out", str(tmp_path / "x.csv")], tmp_path)
    assert proc.returncode == 2
    assert proc.stderr.strip()


def test_run_rejects_bad_config(tmp_path):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[scenario]\nwavelength = 3\n")
    proc = run_cli(["run", "--config", str(cfg),
                    "--out", str(tmp_path / "x.csv")], tmp_path)
    assert proc.returncode == 2
    assert "wavelength" in proc.stderr


def test_run_budget_exceeded_is_exit_3(tmp_path):
    cfg = tmp_path / "big.ini"
    cfg.write_text(CONFIG_BIG)
    out = tmp_path / "big.csv"
    proc = run_cli(["run", "--config", str(cfg), "--schemes",
                    "mm1,exhaustive", "--trials", "2", "--out", str(out)],
                   tmp_path)
    assert proc.returncode == 3
    assert "exhaustive" in proc.stderr.lower()
    _, rows = read_rows(out)  # surviving schemes still produce rows
    assert {r[1] for r in rows} == {"mm1"}


def test_figure_default_output_name(tmp_path):
    proc = run_cli(["figure", "a", "--trials", "3", "--seed", "5"], tmp_path)
    assert proc.returncode == 0, proc.stderr
    out = tmp_path / "figure_a.csv"
    assert out.exists()
    _, rows = read_rows(out)
    assert len(rows) == 3 * 4 * 7


def test_figure_repeatable_bytes(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        proc = run_cli(["figure", "c", "--trials", "3", "--seed", "7",
                        "--out", str(path)], tmp_path)
        assert proc.returncode == 0, proc.stderr
    assert filecmp.cmp(a, b, shallow=False)


def test_figure_rejects_unknown_name(tmp_path):
    proc = run_cli(["figure", "z", "--out", str(tmp_path / "z.csv")],
                   tmp_path)
    assert proc.returncode == 2


def test_timing_flag_populates_column(tmp_path):
    out = tmp_path / "timed.csv"
    proc = run_cli(["run", "--schemes", "ia", "--trials", "2",
                    "--timing", "--out", str(out)], tmp_path)
    assert proc.returncode == 0, proc.stderr
    _, rows = read_rows(out)
    assert any(float(r[7]) > 0 for r in rows)


def test_aco_log_written(tmp_path):
    out = tmp_path / "rows.csv"
    log = tmp_path / "visits.csv"
    proc = run_cli(["run", "--schemes", "aco", "--trials", "2",
                    "--out", str(out), "--aco-log", str(log)], tmp_path)
    assert proc.returncode == 0, proc.stderr
    lines = log.read_text().strip().splitlines()
    assert lines[0].startswith("trial,")
    assert len(lines) > 1


def test_validate_exit_zero(tmp_path):
    proc = run_cli(["validate"], tmp_path)
    assert proc.returncode == 0, proc.stderr
    assert "pass" in proc.stdout
    assert "fail" not in proc.stdout


def test_no_command_shows_usage(tmp_path):
    proc = run_cli([], tmp_path)
    assert proc.returncode == 2
