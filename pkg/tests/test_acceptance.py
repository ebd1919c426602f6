"""End-to-end acceptance checks, one test per criterion.

Each test delegates to the corresponding function in spherelab.acceptance,
prints its single pass/fail summary line, and registers the line with the
terminal-summary hook so the full tally is visible at the end of the run.
"""

import time

from conftest import record_acceptance_line

from spherelab import acceptance


def _run(criterion):
    start = time.perf_counter()
    res = criterion()
    elapsed = time.perf_counter() - start
    shown = {k: v for k, v in res.details.items() if k != "csv"}
    line = type(res)(res.number, res.name, res.passed, shown, elapsed).summary_line()
    print(line)
    record_acceptance_line(line)
    assert res.passed, line
    return res


def test_farey_partition_exact():
    _run(acceptance.criterion_01_farey_partition)


def test_rep_counts_match_box_oracle():
    _run(acceptance.criterion_02_rep_counts)


def test_gauss_sums_satisfy_dft_identity():
    res = _run(acceptance.criterion_03_gauss_dft)
    assert res.details["max_err"] < 1e-12


def test_heat_forms_agree():
    res = _run(acceptance.criterion_04_poisson_forms)
    assert res.details["max_rel_err"] < 1e-8


def test_kernel_envelope_stays_bounded():
    _run(acceptance.criterion_05_kernel_envelope)


def test_arc_sum_reconstructs_multiplier():
    res = _run(acceptance.criterion_06_arc_reconstruction)
    assert res.details["max_err"] < 1e-6


def test_surface_transform_oracles():
    _run(acceptance.criterion_07_sphere_ft)


def test_main_term_integral_matches_closed_form():
    res = _run(acceptance.criterion_08_mainterm_identity)
    assert res.details["max_closed_err"] < 1e-4


def test_approximation_error_decays():
    res = _run(acceptance.criterion_09_approx_decay)
    assert res.details["band"] <= 3.0
    assert -0.8 <= res.details["loglog_slope"] <= -0.2


def test_matrix_norm_solver_matches_oracles():
    _run(acceptance.criterion_10_ncmax)


def test_orbit_average_matches_lattice_average():
    _run(acceptance.criterion_11_transfer_identity)


def test_ratio_table_monotone_and_emitted():
    res = _run(acceptance.criterion_12_ratio_table)
    assert "csv" in res.details
    assert res.details["csv"].startswith("K,ratio")
