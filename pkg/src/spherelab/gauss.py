"""Normalized quadratic Gauss sums over (Z/q)^d and their discrete Fourier transform.

The normalized sum is

    G(a/q, l) = q^{-d} sum_{n in (Z/q)^d} e((|n|^2 a + n.l)/q),   e(x) = exp(2 pi i x),

which factors over coordinates into one-dimensional sums.  Its magnitude is
at most (sqrt 2 / sqrt q)^d, with |G| = q^{-d/2} exactly when q is odd.  The
DFT over the shift l collapses to a single phase,

    sum_l e(k.l/q) G(a/q, l) = e(|k|^2 a / q),

which this module asserts at every evaluation (it is a strong correctness
check on the implementation).  All phase arguments are reduced mod q in
integer arithmetic before any floating multiply by 2 pi / q.
"""

from __future__ import annotations

import math

import numpy as np

REL_TOL_DFT = 1e-12


def _check_coprime(a: int, q: int) -> None:
    if q < 1:
        raise ValueError(f"modulus q must be >= 1, got {q}")
    if math.gcd(a, q) != 1:
        raise ValueError(f"need gcd(a, q) = 1, got a={a}, q={q}")


def gauss_sum_1d_all(a: int, q: int) -> np.ndarray:
    """Vector of the 1-d normalized sums for every shift l = 0..q-1."""
    _check_coprime(a, q)
    n = np.arange(q, dtype=np.int64)
    quad = (n * n % q) * (a % q) % q
    # phase matrix over (shift, n), arguments kept as exact residues mod q
    args = (quad[None, :] + n[None, :] * n[:, None] % q) % q
    phases = np.exp(2j * np.pi * args / q)
    return phases.mean(axis=1)


def gauss_sum_1d(a: int, q: int, l: int) -> complex:
    """q^{-1} sum_n e((n^2 a + n l)/q)."""
    _check_coprime(a, q)
    n = np.arange(q, dtype=np.int64)
    args = ((n * n % q) * (a % q) + n * (l % q)) % q
    return complex(np.exp(2j * np.pi * args / q).mean())


def gauss_sum(a: int, q: int, l: tuple[int, ...]) -> complex:
    """Normalized d-dimensional sum, computed as the product of 1-d factors."""
    out = complex(1.0)
    for li in l:
        out *= gauss_sum_1d(a, q, li)
    return out


def gauss_magnitude_bound(q: int, d: int) -> float:
    """The envelope (sqrt 2)^d q^{-d/2}; tight only when 4 | q."""
    return 2.0 ** (d / 2) * q ** (-d / 2)


def gauss_dft(a: int, q: int, k: tuple[int, ...]) -> complex:
    """DFT of G(a/q, .) over shifts, evaluated at frequency k.

    Computed by direct summation (one 1-d DFT per coordinate, multiplied
    together) and asserted against the exact phase e(|k|^2 a / q) to
    within 1e-12.  A violation means a Gauss-sum implementation bug.
    """
    _check_coprime(a, q)
    g1 = gauss_sum_1d_all(a, q)
    l = np.arange(q, dtype=np.int64)
    value = complex(1.0)
    for ki in k:
        phases = np.exp(2j * np.pi * ((ki % q) * l % q) / q)
        value *= complex(phases @ g1)
    norm_sq = sum(int(ki) * int(ki) for ki in k)
    expected = np.exp(2j * np.pi * ((norm_sq % q) * (a % q) % q) / q)
    if abs(value - expected) > REL_TOL_DFT:
        raise ArithmeticError(
            f"Gauss DFT identity violated at a={a}, q={q}, k={k}: "
            f"|computed - phase| = {abs(value - expected):.3e}"
        )
    return value
