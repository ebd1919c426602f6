"""Shell cache file format, tamper detection with line numbers, the
read-vs-enumerate speedup, and the installed command-line surface."""

import csv
import io
import subprocess
import sys
import time

import numpy as np
import pytest

from spherelab.cache import load_or_enumerate, read_shell, shell_path, write_shell
from spherelab.errors import CacheFormatError, ShellCountMismatchError
from spherelab.lattice import sphere_shell


def test_roundtrip(tmp_path):
    shell = sphere_shell(3, 14)
    path = tmp_path / "s.txt"
    write_shell(shell, path)
    back = read_shell(path)
    assert back.dimension == 3 and back.k == 14
    assert np.array_equal(back.points, shell.points)


def test_load_or_enumerate_hits_cache(tmp_path):
    first = load_or_enumerate(4, 6, tmp_path)
    assert shell_path(tmp_path, 4, 6).exists()
    second = load_or_enumerate(4, 6, tmp_path)
    assert np.array_equal(first.points, second.points)


def _write_lines(path, lines):
    path.write_text("\n".join(lines) + "\n")


def test_tampered_header(tmp_path):
    path = tmp_path / "s.txt"
    _write_lines(path, ["2 1 999", "0 1"])
    with pytest.raises(ShellCountMismatchError):
        read_shell(path)
    _write_lines(path, ["2 1", "0 1"])
    with pytest.raises(CacheFormatError) as err:
        read_shell(path)
    assert err.value.line == 1


def test_tampered_rows(tmp_path):
    shell = sphere_shell(2, 1)  # 4 points
    path = tmp_path / "s.txt"

    write_shell(shell, path)
    lines = path.read_text().splitlines()
    lines[2] = "0 x"
    _write_lines(path, lines)
    with pytest.raises(CacheFormatError) as err:
        read_shell(path)
    assert err.value.line == 3 and "non-integer" in str(err.value)

    lines[2] = "7 7"
    _write_lines(path, lines)
    with pytest.raises(CacheFormatError) as err:
        read_shell(path)
    assert err.value.line == 3 and "squared norm" in str(err.value)

    lines[2] = "0 1 0"
    _write_lines(path, lines)
    with pytest.raises(CacheFormatError) as err:
        read_shell(path)
    assert err.value.line == 3 and "coordinates" in str(err.value)


def test_truncated_and_padded(tmp_path):
    shell = sphere_shell(2, 1)
    path = tmp_path / "s.txt"
    write_shell(shell, path)
    lines = path.read_text().splitlines()

    _write_lines(path, lines[:3])  # drop the last two points
    with pytest.raises(CacheFormatError) as err:
        read_shell(path)
    assert err.value.line == 4

    _write_lines(path, lines + ["0 1"])
    with pytest.raises(CacheFormatError) as err:
        read_shell(path)
    assert err.value.line == 6 and "trailing" in str(err.value)


def test_read_beats_enumeration(tmp_path):
    d, k = 5, 52
    t0 = time.perf_counter()
    load_or_enumerate(d, k, tmp_path)
    cold = time.perf_counter() - t0
    warm = min(
        _timed(lambda: load_or_enumerate(d, k, tmp_path)) for _ in range(3)
    )
    # enumeration measured around 12x slower than the cached read; assert
    # a conservative factor so scheduler noise cannot flake the suite
    assert warm * 3.0 < cold


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


# ---------------------------------------------------------------- CLI ----

def run_cli(*argv, expect=0):
    proc = subprocess.run(
        [sys.executable, "-m", "spherelab.cli", *argv],
        capture_output=True,
        text=True,
        timeout=600,
    )
    assert proc.returncode == expect, proc.stdout + proc.stderr
    return proc


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def test_cli_rd():
    proc = run_cli("rd", "--d", "5", "--max-k", "6")
    header, rows = parse_csv(proc.stdout)
    assert header == ["k", "count"]
    assert [int(r[1]) for r in rows] == [1, 10, 40, 80, 90, 112, 240]


def test_cli_shell_with_cache(tmp_path):
    proc = run_cli("shell", "--d", "3", "--k", "2", "--cache", str(tmp_path))
    header, rows = parse_csv(proc.stdout)
    assert header == ["x_1", "x_2", "x_3"]
    assert len(rows) == 12
    assert [int(v) for v in rows[0]] == [-1, -1, 0]
    assert shell_path(tmp_path, 3, 2).exists()


def test_cli_farey():
    proc = run_cli("farey", "--order", "3")
    _, rows = parse_csv(proc.stdout)
    assert rows[0][:2] == ["0", "1"]
    assert rows[2][:2] == ["1", "2"]


def test_cli_gauss_exit_codes():
    proc = run_cli("gauss", "--a", "1", "--q", "3", "--ell", "0,0,0,0,0")
    _, rows = parse_csv(proc.stdout)
    assert abs(float(rows[0][9]) - 3**-2.5) < 1e-14  # |value|
    assert abs(float(rows[0][10]) - 1.0) < 1e-12     # q^{d/2}-normalized
    proc = subprocess.run(
        [sys.executable, "-m", "spherelab.cli", "gauss", "--a", "2", "--q", "4"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode != 0 and "not reduced" in proc.stderr


def test_cli_mult_value():
    proc = run_cli("mult", "--d", "5", "--k", "1", "--xi", "0.5,0,0,0,0")
    _, rows = parse_csv(proc.stdout)
    assert abs(float(rows[0][5]) - 0.6) < 1e-12  # re column
    assert float(rows[0][8]) == 1.0              # unit-phase envelope


def test_cli_ncmax(tmp_path):
    problem = tmp_path / "fam.txt"
    problem.write_text("2 2 2\n1 0\n0 -2\n\n-3 0\n0 1\n")
    proc = run_cli("ncmax", "--input", str(problem))
    header, rows = parse_csv(proc.stdout)
    i = header.index("objective")
    assert abs(float(rows[0][i]) - 13**0.5) < 1e-5
    proc = run_cli("ncmax", "--input", str(problem), "--p", "inf")
    _, rows = parse_csv(proc.stdout)
    assert float(rows[0][i]) == 3.0


def test_cli_transfer_trivial():
    proc = run_cli("transfer", "--theta", "0,0,0,0,0", "--cap", "2", "--J", "3")
    header, rows = parse_csv(proc.stdout)
    assert header == ["K", "ratio", "lower_bound", "upper_bound", "solver_gap"]
    assert [int(r[0]) for r in rows] == [1, 4]
    for r in rows:
        assert abs(float(r[1]) - 1.0) < 1e-6
    assert "truncation_identity_deviation" in proc.stderr


def test_cli_experiment_bad_config(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("kind = farey\nLambda = nope\n")
    proc = subprocess.run(
        [sys.executable, "-m", "spherelab.cli", "experiment", "run", str(cfg)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode != 0
    assert "config key" in proc.stderr


def test_cli_experiment_farey(tmp_path):
    cfg = tmp_path / "farey.cfg"
    cfg.write_text("# partition sanity\nkind = farey\nLambda = 5\n")
    proc = run_cli("experiment", "run", str(cfg))
    assert "result = pass" in proc.stdout
    assert "partition_exact: pass" in proc.stdout


def test_cli_out_writes_file(tmp_path):
    out = tmp_path / "rd.csv"
    run_cli("--out", str(out), "rd", "--d", "2", "--max-k", "4")
    header, rows = parse_csv(out.read_text())
    assert [int(r[1]) for r in rows] == [1, 4, 4, 0, 4]
