"""Farey fractions and the exact interval partition of [0,1] they induce.

Everything here is exact rational arithmetic (fractions.Fraction).  For an
order L, the reduced fractions a/q in [0,1] with q <= L split [0,1] into
one interval per fraction.  Writing a1/q1 < a/q < a2/q2 for consecutive
fractions, the interval owned by a/q is

    [ a/q - beta/(q L),  a/q + alpha/(q L) )

with alpha = L/(q + q2) and beta = L/(q + q1).  The endpoint fractions 0/1
and 1/1 both use alpha = beta = L/(1 + L); the 0/1 interval starts at 0 and
the 1/1 interval is [1 - beta/L, 1], closed on the right.  Both weights lie
strictly between 1/2 and 1, and the intervals tile [0,1] exactly.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class FareySequence:
    order: int
    fractions: tuple[Fraction, ...]

    def __len__(self) -> int:
        return len(self.fractions)


@dataclass(frozen=True)
class MajorArc:
    """One interval of the order-L partition, owned by its center fraction."""

    center: Fraction
    left: Fraction
    right: Fraction
    alpha: Fraction
    beta: Fraction
    order: int
    closed_right: bool

    def contains(self, s: Fraction) -> bool:
        if self.closed_right:
            return self.left <= s <= self.right
        return self.left <= s < self.right


def farey_sequence(order: int) -> FareySequence:
    """All reduced fractions in [0,1] with denominator <= order, ascending.

    Uses the classical next-term recurrence: from consecutive terms p/q,
    p'/q' the following term is (j*p' - p)/(j*q' - q) with
    j = floor((order + q)/q').
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    terms = [Fraction(0, 1), Fraction(1, order)]
    while terms[-1] != 1:
        p, q = terms[-2].numerator, terms[-2].denominator
        p2, q2 = terms[-1].numerator, terms[-1].denominator
        j = (order + q) // q2
        terms.append(Fraction(j * p2 - p, j * q2 - q))
    return FareySequence(order=order, fractions=tuple(terms))


def major_arcs(seq: FareySequence) -> list[MajorArc]:
    """The exact partition of [0,1] owned by the fractions of seq."""
    L = seq.order
    fracs = seq.fractions
    edge = Fraction(L, 1 + L)
    arcs: list[MajorArc] = []
    for i, f in enumerate(fracs):
        q = f.denominator
        if f == 0:
            alpha = beta = edge
            left = Fraction(0, 1)
            right = alpha / L
            closed = False
        elif f == 1:
            alpha = beta = edge
            left = 1 - beta / L
            right = Fraction(1, 1)
            closed = True
        else:
            q1 = fracs[i - 1].denominator
            q2 = fracs[i + 1].denominator
            alpha = Fraction(L, q + q2)
            beta = Fraction(L, q + q1)
            left = f - beta / (q * L)
            right = f + alpha / (q * L)
            closed = False
        arcs.append(
            MajorArc(
                center=f,
                left=left,
                right=right,
                alpha=alpha,
                beta=beta,
                order=L,
                closed_right=closed,
            )
        )
    return arcs


def verify_partition(arcs: list[MajorArc]) -> bool:
    """True iff the arcs tile [0,1] exactly: consecutive endpoints agree,
    the first starts at 0 and the last ends at 1 (exact rationals)."""
    if arcs[0].left != 0 or arcs[-1].right != 1 or not arcs[-1].closed_right:
        return False
    for prev, cur in zip(arcs, arcs[1:]):
        if prev.right != cur.left:
            return False
        if prev.closed_right:
            return False
    return True


def locate_arc(s, arcs: list[MajorArc]) -> tuple[Fraction, Fraction]:
    """Find the arc owning s in [0,1]; return (center, t) with t = s - center.

    s may be a Fraction, int, or float (floats are converted exactly).
    Binary search over left endpoints; |t| < 1/(q L) always holds because
    both interval weights are < 1.
    """
    s = Fraction(s)
    if not 0 <= s <= 1:
        raise ValueError(f"s must lie in [0,1], got {s}")
    lefts = [arc.left for arc in arcs]
    i = bisect_right(lefts, s) - 1
    arc = arcs[i]
    if not arc.contains(s):
        raise AssertionError(f"partition lookup failed for s={s}")
    return arc.center, s - arc.center
