"""Exact rational partition of the circle by denominator-bounded fractions."""

from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spherelab.farey import farey_sequence, locate_arc, major_arcs, verify_partition

F = Fraction


def test_order_one():
    assert farey_sequence(1).fractions == (F(0), F(1))


def test_order_three():
    assert farey_sequence(3).fractions == (F(0), F(1, 3), F(1, 2), F(2, 3), F(1))


def test_order_five_neighbors():
    fr = farey_sequence(5).fractions
    assert len(fr) == 11
    i = fr.index(F(2, 5))
    assert fr[i + 1] == F(1, 2)
    assert fr[i + 1] - fr[i] == F(1, 10)


def _totient(q: int) -> int:
    return sum(1 for a in range(1, q + 1) if gcd(a, q) == 1)


@pytest.mark.parametrize("order", [1, 2, 7, 31, 100])
def test_length_is_totient_sum(order):
    expected = 1 + sum(_totient(q) for q in range(1, order + 1))
    assert len(farey_sequence(order)) == expected


@given(order=st.integers(1, 60))
@settings(max_examples=30, deadline=None)
def test_neighbor_determinant(order):
    fr = farey_sequence(order).fractions
    for x, y in zip(fr, fr[1:]):
        assert y.numerator * x.denominator - x.numerator * y.denominator == 1


def test_arc_table_order_three():
    arcs = {a.center: a for a in major_arcs(farey_sequence(3))}
    assert (arcs[F(1, 2)].left, arcs[F(1, 2)].right) == (F(2, 5), F(3, 5))
    assert (arcs[F(0)].left, arcs[F(0)].right) == (F(0), F(1, 4))
    assert (arcs[F(1)].left, arcs[F(1)].right) == (F(3, 4), F(1))
    assert arcs[F(1)].closed_right and not arcs[F(0)].closed_right


def test_two_arcs_at_order_one():
    arcs = major_arcs(farey_sequence(1))
    assert [(a.left, a.right) for a in arcs] == [(F(0), F(1, 2)), (F(1, 2), F(1))]
    assert [a.closed_right for a in arcs] == [False, True]


@pytest.mark.parametrize("order", list(range(1, 40)) + [80])
def test_partition(order):
    assert verify_partition(major_arcs(farey_sequence(order)))


def test_halfwidth_weights_in_band():
    # interior weights order/(q + q') are strictly inside (1/2, 1) because
    # consecutive denominators are coprime and sum past the order
    for order in (2, 3, 5, 17, 59, 200):
        vals = [v for a in major_arcs(farey_sequence(order)) for v in (a.alpha, a.beta)]
        assert min(vals) > F(1, 2) and max(vals) < 1
    edge = major_arcs(farey_sequence(1))[0]
    assert edge.alpha == edge.beta == F(1, 2)


def test_locate_centers_and_edges():
    arcs = major_arcs(farey_sequence(3))
    assert locate_arc(F(1, 2), arcs) == (F(1, 2), F(0))
    center, t = locate_arc(0.39, arcs)
    assert center == F(1, 3)
    assert abs(t - (F(0.39) - F(1, 3))) == 0
    assert locate_arc(1, arcs) == (F(1), F(0))
    assert locate_arc(0, arcs) == (F(0), F(0))


def test_locate_rejects_outside():
    arcs = major_arcs(farey_sequence(2))
    with pytest.raises(ValueError):
        locate_arc(1.5, arcs)


def test_locate_offset_bound():
    # across a fine grid, the offset beats 1/(q * order)
    order = 50
    arcs = major_arcs(farey_sequence(order))
    for i in range(10_000):
        center, t = locate_arc(F(i, 10_000), arcs)
        assert abs(t) < F(1, center.denominator * order)
