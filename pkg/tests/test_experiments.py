"""Config parsing, deterministic report bytes, and quick runner checks."""

import math

import numpy as np
import pytest

from spherelab.errors import ConfigError
from spherelab.experiments import (
    DECAY_OFFSETS,
    ExperimentConfig,
    decay_grid,
    load_config,
    parse_config,
    read_ncmax_problem,
    run_experiment,
    write_ncmax_problem,
)
from spherelab.farey import farey_sequence, major_arcs
from spherelab.ncmax import MaxNormProblem, hermitian_element


def test_parse_happy_path():
    cfg = parse_config("# comment\nkind = farey\nLambda = 12\n\n")
    assert cfg.kind == "farey"
    assert cfg.parameters["Lambda"] == 12
    assert cfg.output is None


def test_parse_defaults_filled():
    cfg = parse_config("kind = gauss\n")
    assert cfg.parameters["q_max"] == 12
    assert cfg.parameters["tol"] == 1e-12


@pytest.mark.parametrize(
    "text,key",
    [
        ("Lambda = 3\n", "kind"),
        ("kind = frobnicate\n", "kind"),
        ("kind = farey\n", "Lambda"),
        ("kind = farey\nLambda = x\n", "Lambda"),
        ("kind = farey\nLambda = 3\nwidgets = 1\n", "widgets"),
        ("kind = farey\nLambda = 3\nseed = 1\n", "seed"),
        ("kind = ncmax\ntol = big\ninput = f\n", "tol"),
    ],
)
def test_parse_errors_name_the_key(text, key):
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert err.value.key == key
    assert f"config key '{key}'" in str(err.value)


def test_echo_lines_order(tmp_path):
    cfg = parse_config("kind = farey\nLambda = 4\n", output=tmp_path / "o.csv")
    lines = cfg.echo_lines()
    assert lines[0] == "kind = farey"
    assert lines[-1].startswith("out = ")


def test_load_config(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("kind = farey\nLambda = 6\n")
    assert load_config(path).parameters["Lambda"] == 6


def test_farey_runner_matches_library():
    report = run_experiment(ExperimentConfig("farey", {"Lambda": 7}))
    assert report.passed
    arcs = major_arcs(farey_sequence(7))
    assert len(report.rows) == len(arcs)
    first = report.rows[0]
    assert (first[0], first[1]) == (0, 1)
    # endpoints are carried as exact numerator/denominator pairs
    assert first[2] / first[3] == 0.0


def test_gauss_runner_quick():
    report = run_experiment(
        ExperimentConfig("gauss", {"d": 3, "q_max": 6, "L": 5, "seed": 1, "tol": 1e-12})
    )
    assert report.passed
    assert report.rng == "numpy PCG64 seed=1"


def test_poisson_runner_deterministic_bytes():
    cfg = ExperimentConfig("poisson_check", {"d": 2, "L": 6, "seed": 11, "tol": 1e-8})
    a = run_experiment(cfg)
    b = run_experiment(cfg)
    assert a.csv_text() == b.csv_text()
    assert a.report_text() == b.report_text()
    assert a.passed
    assert "wall" not in a.report_text()
    assert "result = pass" in a.report_text()


def test_sphere_ft_runner_low_dim():
    cfg = ExperimentConfig("sphere_ft", {"d": 3, "L": 20_000, "seed": 0, "tol": 1e-8})
    report = run_experiment(cfg)
    assert report.passed
    assert report.summary["value_at_zero"] == 1.0


def test_ncmax_runner_roundtrip(tmp_path):
    fam = [
        hermitian_element(np.array([[1.0, 0.5 - 0.25j], [0.5 + 0.25j, -2.0]])),
        hermitian_element(np.diag([3.0, 0.0])),
    ]
    prob = MaxNormProblem(p=math.inf, family=tuple(fam))
    path = tmp_path / "fam.txt"
    write_ncmax_problem(prob, path)
    back = read_ncmax_problem(path)
    assert math.isinf(back.p)
    for x, y in zip(prob.family, back.family):
        assert np.abs(x.entries - y.entries).max() < 1e-15
    report = run_experiment(
        ExperimentConfig("ncmax", {"input": str(path), "tol": 1e-7})
    )
    assert report.passed
    assert report.summary["objective"] >= 3.0 - 1e-6


def test_transfer_runner_trivial():
    cfg = ExperimentConfig(
        "transfer",
        {"family": "trivial", "n": 2, "p": 2.0, "K": 4, "seed": 7, "tol": 1e-7},
    )
    report = run_experiment(cfg)
    assert report.passed
    assert abs(report.summary["max_ratio"] - 1.0) < 1e-6


def test_reconstruct_runner_quick():
    cfg = ExperimentConfig(
        "reconstruct",
        {"d": 5, "K": 1, "Lambda": 2, "L": 2, "seed": 0, "tol": 1e-6},
    )
    report = run_experiment(cfg)
    assert report.passed
    assert report.summary["arcs"] == 3


def test_report_write(tmp_path):
    report = run_experiment(ExperimentConfig("farey", {"Lambda": 3}))
    csv_path, report_path = report.write(tmp_path / "farey.csv")
    raw = csv_path.read_bytes()
    assert raw.splitlines()[0].split(b",")[0] == b"a"
    assert b"\r\n" in raw  # RFC-4180 line endings on disk
    assert report_path.read_text().startswith("[config]")


def test_decay_grid_geometry():
    grid = decay_grid()
    assert grid.shape == (15 * len(DECAY_OFFSETS), 5)
    # every probe stays well separated from the integer lattice, so the
    # surface-measure factor cannot blow up the normalized statistic
    dist = np.linalg.norm(grid - np.round(grid), axis=1)
    assert dist.min() >= 1.0 / 3.0 - 1e-12
