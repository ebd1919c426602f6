"""Arc decomposition of the normalized spherical multiplier.

The exact multiplier of the normalized shell average at radius-squared k is

    m_k(xi) = r_d(k)^{-1} sum_{|m|^2 = k} e(m . xi),

a real number in [-1, 1] with m_k(0) = 1.  Writing the shell average
through the damped heat multiplier and cutting the circle [0,1] into the
Farey intervals of order L (with eps = L^{-2}) gives one arc piece per
fraction,

    piece(a/q; xi) = e^{2 pi eps k} / r_d(k) *
                     Integral over the arc of e^{-2 pi i k s} H_s(xi) ds,

and the pieces sum exactly to m_k(xi) over any Farey order.  Replacing the
arc integral by its stationary main term yields the rational approximant

    approx(a/q; xi) = e(-k a / q) sum_l G(a/q, l) w_q(xi - l/q)
                                              j_main(xi - l/q),

where w_q is the narrow cutoff at modulus q (so at most one image l
contributes at any xi).  Summing approximants over all coprime pairs
(q, a), q <= q_max, 1 <= a <= q, plus the (1, 0) pair, gives the full
approximation whose distance to m_k decays like L^{2 - d/2} at k ~ L^2.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from .cutoff import NARROW, CutoffSpec, cutoff
from .errors import BudgetExceededError
from .farey import MajorArc
from .gauss import gauss_sum
from .heat import heat_direct_batch
from .lattice import SphereShell
from .sphere import _rd, j_main, radial_constant


def exact_multiplier(shell: SphereShell, xi) -> float:
    """Normalized exponential sum over the shell; real by symmetry."""
    xi = np.asarray(xi, dtype=float)
    phases = shell.points @ xi
    value = np.exp(2j * np.pi * phases).sum() / shell.count
    return float(value.real)


def exact_multiplier_many(shell: SphereShell, xis: np.ndarray) -> np.ndarray:
    """exact_multiplier at several frequency points (rows of xis)."""
    phases = xis @ shell.points.T
    return np.exp(2j * np.pi * phases).sum(axis=1).real / shell.count


def arc_multiplier(
    d: int,
    k: int,
    arc: MajorArc,
    xi,
    eps: float,
    nodes_per_panel: int = 12,
    max_panels: int = 200_000,
    tol: float = 1e-12,
) -> complex:
    """One arc piece of the circle decomposition, by panel quadrature.

    Panels span at most a quarter period of e^{-2 pi i k s} and at most
    eps/2 (the kernel scale near the arc center); Gauss-Legendre nodes on
    each panel.  eps must equal order^{-2} for the arc's Farey order.
    """
    if not math.isclose(eps, arc.order ** -2.0, rel_tol=1e-9):
        raise ValueError(f"eps={eps} does not match arc order {arc.order}")
    lo, hi = float(arc.left), float(arc.right)
    width = min(1.0 / (4.0 * max(k, 1)), eps / 2.0)
    n_panels = int(math.ceil((hi - lo) / width))
    if n_panels > max_panels:
        raise BudgetExceededError(f"{n_panels} arc panels exceed cap {max_panels}")
    edges = np.linspace(lo, hi, n_panels + 1)
    gl_x, gl_w = leggauss(nodes_per_panel)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    s = (mid[:, None] + half[:, None] * gl_x[None, :]).ravel()
    w = (half[:, None] * gl_w[None, :]).ravel()
    kernel = heat_direct_batch(eps, s, xi, tol=tol).value
    osc = np.exp(-2j * np.pi * np.mod(k * s, 1.0))
    integral = complex((w * osc * kernel).sum())
    return math.exp(2.0 * math.pi * eps * k) / _rd(d, k) * integral


class ApproxTotal(NamedTuple):
    value: complex
    tail_bound: float
    q_max: int


def approx_arc_multiplier(d: int, k: int, a: int, q: int, xi) -> complex:
    """Stationary main term of one arc piece (defined for every coprime pair).

    At most one lattice image l/q falls inside the narrow cutoff support,
    so the image sum collapses to a single term (or vanishes).
    """
    if math.gcd(a, q) != 1:
        raise ValueError(f"need gcd(a, q) = 1, got a={a}, q={q}")
    xi = np.asarray(xi, dtype=float)
    l = np.rint(q * xi).astype(np.int64)
    u = xi - l / q
    w = cutoff(CutoffSpec(NARROW, q), u)
    if w == 0.0:
        return 0.0 + 0.0j
    phase = np.exp(-2j * np.pi * ((k % q) * (a % q) % q) / q)
    return complex(phase * gauss_sum(a, q, tuple(int(c) for c in l)) * w * j_main(d, k, u))


def approx_tail_bound(d: int, k: int, q_max: int) -> float:
    """Envelope bound on the mass of approximants with q > q_max.

    Per pair the single surviving image is at most
    (sqrt 2)^d q^{-d/2} * c_d k^{(d-2)/2} / r_d(k); summing phi(q) <= q
    values of a and comparing with the integral of q^{1 - d/2} gives

        bound = (sqrt 2)^d * c_d k^{(d-2)/2} / r_d(k)
                            * (2/(d-4)) q_max^{(4-d)/2},   d >= 5.
    """
    if d < 5:
        raise ValueError("the approximant tail only sums for d >= 5")
    amp = 2.0 ** (d / 2) * radial_constant(d) * k ** ((d - 2) / 2.0) / _rd(d, k)
    return amp * (2.0 / (d - 4)) * q_max ** ((4 - d) / 2.0)


def approx_total(
    d: int,
    k: int,
    xi,
    q_max: int | None = None,
    tail_tol: float | None = None,
    q_budget: int = 2000,
) -> ApproxTotal:
    """Sum of approximants over coprime pairs with q <= q_max plus (1, 0).

    Either q_max is given, or it is chosen as the smallest modulus whose
    envelope tail bound is below tail_tol (error if that exceeds q_budget).
    """
    if q_max is None:
        if tail_tol is None:
            raise ValueError("give q_max or tail_tol")
        q_max = 1
        while approx_tail_bound(d, k, q_max) >= tail_tol:
            q_max += 1
            if q_max > q_budget:
                raise BudgetExceededError(
                    f"tail_tol={tail_tol} needs q_max > {q_budget}"
                )
    total = approx_arc_multiplier(d, k, 0, 1, xi)  # the (1, 0) pair
    for q in range(1, q_max + 1):
        for a in range(1, q + 1):
            if math.gcd(a, q) == 1:
                total += approx_arc_multiplier(d, k, a, q, xi)
    return ApproxTotal(value=total, tail_bound=approx_tail_bound(d, k, q_max), q_max=q_max)
