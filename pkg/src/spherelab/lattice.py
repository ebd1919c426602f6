"""Exact lattice combinatorics: sums of squares and integer sphere shells.

Counts are ordered, signed representations: r_d(k) is the number of
m in Z^d with m_1^2 + ... + m_d^2 = k.  All counting is done in exact
integer arithmetic (Python ints), so there is no overflow at any size
this package can enumerate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError

DEFAULT_POINT_BUDGET = 5_000_000


@dataclass(frozen=True)
class RepCountTable:
    """r_d(k) for k = 0..max_k, as exact integers."""

    dimension: int
    max_k: int
    counts: tuple[int, ...]

    def __getitem__(self, k: int) -> int:
        return self.counts[k]


@dataclass(frozen=True)
class SphereShell:
    """All integer points on the sphere |m|^2 = k in Z^d, lexicographic order."""

    dimension: int
    k: int
    points: np.ndarray  # shape (count, d), dtype int64

    @property
    def count(self) -> int:
        return self.points.shape[0]


def rep_counts(d: int, max_k: int) -> RepCountTable:
    """Count representations of 0..max_k as ordered sums of d signed squares.

    Built by iterated 1-d convolution: the one-dimensional count is
    r_1(0) = 1 and r_1(j^2) = 2 for j >= 1, and r_d = r_{d-1} * r_1
    truncated at max_k.  Cost O(d * max_k * sqrt(max_k)).
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if max_k < 0:
        raise ValueError(f"max_k must be >= 0, got {max_k}")
    squares = [j * j for j in range(1, math.isqrt(max_k) + 1)]
    cur = [0] * (max_k + 1)
    cur[0] = 1
    for s in squares:
        cur[s] = 2
    for _ in range(d - 1):
        nxt = list(cur)  # j = 0 term of the convolution
        for s in squares:
            for k in range(s, max_k + 1):
                nxt[k] += 2 * cur[k - s]
        cur = nxt
    return RepCountTable(dimension=d, max_k=max_k, counts=tuple(cur))


def _fill_shell(d: int, k: int, prefix: list[int], out: list[tuple[int, ...]]) -> None:
    if d == 1:
        r = math.isqrt(k)
        if r * r == k:
            if r == 0:
                out.append((*prefix, 0))
            else:
                out.append((*prefix, -r))
                out.append((*prefix, r))
        return
    s = math.isqrt(k)
    for m in range(-s, s + 1):
        prefix.append(m)
        _fill_shell(d - 1, k - m * m, prefix, out)
        prefix.pop()


def sphere_shell(d: int, k: int, point_budget: int = DEFAULT_POINT_BUDGET) -> SphereShell:
    """Enumerate the shell {m in Z^d : |m|^2 = k} in lexicographic order.

    The exact count is computed first; enumeration refuses to start if it
    would exceed point_budget.
    """
    expected = rep_counts(d, k)[k]
    if expected > point_budget:
        raise BudgetExceededError(
            f"shell d={d}, k={k} has {expected} points, budget is {point_budget}"
        )
    pts: list[tuple[int, ...]] = []
    _fill_shell(d, k, [], pts)
    if len(pts) != expected:
        raise AssertionError(
            f"shell enumeration bug: found {len(pts)} points, counted {expected}"
        )
    arr = np.array(pts, dtype=np.int64).reshape(len(pts), d)
    return SphereShell(dimension=d, k=k, points=arr)


def box_counts_oracle(d: int, max_k: int) -> list[int]:
    """Brute-force oracle for rep_counts: score every point of the box
    [-sqrt(max_k), sqrt(max_k)]^d by its squared norm.  Exponential in d;
    intended for cross-checks at small d only."""
    r = math.isqrt(max_k)
    line = np.arange(-r, r + 1, dtype=np.int64) ** 2
    norms = line
    for _ in range(d - 1):
        norms = np.add.outer(norms, line).ravel()
    counts = np.bincount(norms[norms <= max_k], minlength=max_k + 1)
    return [int(c) for c in counts]
