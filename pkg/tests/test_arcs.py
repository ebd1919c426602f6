"""Exact shell multiplier, its arc decomposition, and the rational
approximants with their dropped-tail envelope."""

import math

import numpy as np
import pytest

from spherelab.arcs import (
    approx_arc_multiplier,
    approx_tail_bound,
    approx_total,
    arc_multiplier,
    exact_multiplier,
    exact_multiplier_many,
)
from spherelab.farey import farey_sequence, major_arcs
from spherelab.gauss import gauss_magnitude_bound
from spherelab.lattice import rep_counts, sphere_shell
from spherelab.sphere import j_main, radial_constant


def test_exact_multiplier_pinned():
    shell = sphere_shell(5, 1)
    assert exact_multiplier(shell, np.zeros(5)) == 1.0
    # ten signed unit vectors: two give phase -1, eight give +1
    val = exact_multiplier(shell, np.array([0.5, 0.0, 0.0, 0.0, 0.0]))
    assert abs(val - 0.6) < 1e-14


def test_exact_multiplier_real_and_bounded():
    shell = sphere_shell(5, 4)
    rng = np.random.default_rng(0)
    xis = rng.uniform(-0.5, 0.5, size=(20, 5))
    vals = exact_multiplier_many(shell, xis)
    assert np.abs(vals.imag).max() < 1e-12
    assert np.abs(vals).max() <= 1.0 + 1e-12
    for xi, v in zip(xis, vals):
        assert abs(exact_multiplier(shell, xi) - v) < 1e-13


def test_exact_multiplier_half_integer_point():
    shell = sphere_shell(2, 25)
    val = exact_multiplier_many(shell, np.array([[0.5, 0.5]]))[0]
    assert abs(val.imag) < 1e-14


def test_zero_arc_approximant_is_main_profile():
    for d, k in ((5, 1), (5, 4), (6, 2)):
        v = approx_arc_multiplier(d, k, 0, 1, np.zeros(d))
        assert abs(v - j_main(d, k, np.zeros(d))) < 1e-15


def test_approximant_envelope():
    # |approximant| <= (gauss bound) * c_d lam^{d-2} / r_d(k), since both
    # the surface-measure transform and the cutoff are bounded by one
    rng = np.random.default_rng(5)
    for k in (1, 2, 4, 9):
        lam = math.sqrt(k)
        r = rep_counts(5, k)[k]
        envelope_base = radial_constant(5) * lam**3 / r
        for q, a_list in ((1, (0, 1)), (2, (1,)), (3, (1, 2)), (5, (2,))):
            for a in a_list:
                for _ in range(4):
                    xi = a / q + 0.02 * rng.uniform(-1, 1, size=5)
                    v = abs(approx_arc_multiplier(5, k, a, q, xi))
                    bound = gauss_magnitude_bound(q, 5) * envelope_base
                    assert v <= bound * (1.0 + 1e-9)


def test_approx_total_sums_low_arcs():
    xi = np.array([0.23, -0.11, 0.05, 0.0, 0.37])
    total = approx_total(5, 4, xi, q_max=1)
    two_terms = approx_arc_multiplier(5, 4, 0, 1, xi) + approx_arc_multiplier(5, 4, 1, 1, xi)
    assert abs(total.value - two_terms) < 1e-15
    assert total.q_max == 1


def test_approx_total_tail_control():
    xi = np.zeros(5)
    tails = [approx_tail_bound(5, 4, q) for q in (5, 10, 20, 40)]
    assert all(t > 0 for t in tails)
    assert all(b < a for a, b in zip(tails, tails[1:]))
    picked = approx_total(5, 4, xi, tail_tol=0.5)
    assert picked.tail_bound <= 0.5
    with pytest.raises(ValueError):
        approx_total(5, 4, xi)  # needs q_max or tail_tol
    with pytest.raises(ValueError):
        approx_tail_bound(3, 4, 10)  # tail sum diverges below d = 5


def test_rejects_non_reduced_fraction():
    with pytest.raises(ValueError):
        approx_arc_multiplier(5, 4, 2, 4, np.zeros(5))


def test_two_arc_reconstruction_order_one():
    shell = sphere_shell(5, 1)
    arcs = major_arcs(farey_sequence(1))
    for xi in (np.zeros(5), np.array([0.23, -0.11, 0.05, 0.0, 0.37])):
        total = sum(arc_multiplier(5, 1, arc, xi, eps=1.0) for arc in arcs)
        assert abs(total - exact_multiplier(shell, xi)) < 1e-9


def test_arc_multiplier_requires_matching_damping():
    arc = major_arcs(farey_sequence(2))[0]
    with pytest.raises(ValueError):
        arc_multiplier(5, 1, arc, np.zeros(5), eps=1.0)  # order 2 needs 1/4
