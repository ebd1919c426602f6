"""Matrix p-norms and the maximal-envelope norm on finite matrix algebras.

The maximal norm of a finite family x_1..x_N of hermitian n x n matrices is

    inf { ||a||_p : a is positive semidefinite, -a <= x_j <= a for all j },

the noncommutative analogue of the p-norm of sup_j |x_j|.  The infimum is a
convex program over the hermitian matrices: the constraint set is an
intersection of semidefinite order intervals, and tr(a^p) is convex for
p >= 1.  ncmax_norm solves it with a logarithmic-barrier interior-point
method; two exact oracles (diagonal pinching, 2x2 grid refinement) pin the
solver's accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HERM_TOL = 1e-12
DEFAULT_TOL = 1e-7
DEFAULT_NEWTON_BUDGET = 20_000

# Backtracking constants: Armijo fraction, step shrink factor.
ARMIJO = 0.25
SHRINK = 0.5


@dataclass(frozen=True)
class AlgebraElement:
    """An element of the matrix algebra M_n with the unnormalized trace."""

    n: int
    entries: np.ndarray
    hermitian: bool

    def __post_init__(self):
        ent = np.asarray(self.entries, dtype=complex)
        if ent.shape != (self.n, self.n):
            raise ValueError(f"entries must be {self.n}x{self.n}, got {ent.shape}")
        if self.hermitian:
            dev = np.abs(ent - ent.conj().T).max()
            scale = max(1.0, float(np.abs(ent).max()))
            if dev > HERM_TOL * scale:
                raise ValueError(f"matrix is not hermitian (deviation {dev:.3e})")
            ent = 0.5 * (ent + ent.conj().T)
        object.__setattr__(self, "entries", ent)


def hermitian_element(entries) -> AlgebraElement:
    ent = np.asarray(entries, dtype=complex)
    return AlgebraElement(n=ent.shape[0], entries=ent, hermitian=True)


@dataclass(frozen=True)
class MaxNormProblem:
    """A p-exponent together with a finite family of hermitian matrices."""

    p: float
    family: tuple

    def __post_init__(self):
        if not self.family:
            raise ValueError("family must be nonempty")
        if not (1.0 <= self.p):
            raise ValueError("p must lie in [1, inf]")
        n = self.family[0].n
        for x in self.family:
            if not isinstance(x, AlgebraElement) or not x.hermitian:
                raise ValueError("family members must be hermitian AlgebraElements")
            if x.n != n:
                raise ValueError("family members must share the matrix dimension")

    @property
    def n(self) -> int:
        return self.family[0].n


@dataclass(frozen=True)
class MaxNormCertificate:
    """Solver output: envelope matrix, objective, feasibility margin, gap."""

    envelope: AlgebraElement
    objective: float
    residual: float      # least eigenvalue among {a - x_j, a + x_j}
    gap: float           # bound on objective minus the true infimum
    converged: bool
    newton_steps: int


def schatten_norm(x, p) -> float:
    """(sum of sigma_i^p)^(1/p) over singular values; sigma_max for p = inf."""
    ent = x.entries if isinstance(x, AlgebraElement) else np.asarray(x, dtype=complex)
    if isinstance(x, AlgebraElement) and x.hermitian:
        sig = np.abs(np.linalg.eigvalsh(ent))
    else:
        sig = np.linalg.svd(ent, compute_uv=False)
    if math.isinf(p):
        return float(sig.max()) if sig.size else 0.0
    if p < 1.0:
        raise ValueError("p must be >= 1")
    return float((sig ** p).sum() ** (1.0 / p))


def _hermitian_basis(n: int) -> np.ndarray:
    """Real-orthonormal basis of the hermitian n x n matrices, shape (n^2,n,n)."""
    mats = np.zeros((n * n, n, n), dtype=complex)
    idx = 0
    for i in range(n):
        mats[idx, i, i] = 1.0
        idx += 1
    r = 1.0 / math.sqrt(2.0)
    for i in range(n):
        for j in range(i + 1, n):
            mats[idx, i, j] = r
            mats[idx, j, i] = r
            idx += 1
            mats[idx, i, j] = 1j * r
            mats[idx, j, i] = -1j * r
            idx += 1
    return mats


def _divided_differences(lam: np.ndarray, p: float) -> np.ndarray:
    """Matrix f[1](lam_i, lam_j) for f(t) = t^(p-1) on positive eigenvalues."""
    e = p - 1.0
    f = lam ** e
    num = f[:, None] - f[None, :]
    den = lam[:, None] - lam[None, :]
    scale = max(lam.max(), 1e-300)
    close = np.abs(den) < 1e-12 * scale
    out = np.where(close, 1.0, num) / np.where(close, 1.0, den)
    if e == 0.0:
        deriv = np.zeros_like(lam)
    else:
        deriv = e * lam ** (e - 1.0)
    diag = 0.5 * (deriv[:, None] + deriv[None, :])
    return np.where(close, diag, out)


def _feasible(a: np.ndarray, xs: np.ndarray) -> bool:
    for x in xs:
        for y in (a - x, a + x):
            try:
                np.linalg.cholesky(0.5 * (y + y.conj().T))
            except np.linalg.LinAlgError:
                return False
    return True


def _barrier_value(a: np.ndarray, xs: np.ndarray, p: float, mu: float) -> float:
    lam = np.linalg.eigvalsh(a)
    if lam.min() <= 0.0:
        return math.inf
    val = float((lam ** p).sum())
    for x in xs:
        for y in (a - x, a + x):
            ev = np.linalg.eigvalsh(0.5 * (y + y.conj().T))
            if ev.min() <= 0.0:
                return math.inf
            val -= mu * float(np.log(ev).sum())
    return val


def ncmax_norm(prob: MaxNormProblem, tol: float = DEFAULT_TOL,
               newton_budget: int = DEFAULT_NEWTON_BUDGET) -> MaxNormCertificate:
    """Interior-point solve of the maximal-envelope norm.

    Minimizes tr(a^p) - mu * sum_j [logdet(a - x_j) + logdet(a + x_j)] along a
    decreasing mu-path; each center is found by Newton's method over a real
    orthonormal hermitian basis with backtracking line search.  The constraints
    -a <= x_j <= a already force a >= 0 (average the two sides), so no separate
    positivity barrier is needed.  For p = inf the optimum is known in closed
    form: tI is feasible exactly when t >= max_j rho(x_j), and any feasible a
    has v*av >= |v*x_jv| at a peak eigenvector v, so the bisection the barrier
    method would perform collapses to that threshold.
    """
    p = float(prob.p)
    xs = np.stack([x.entries for x in prob.family])
    n = prob.n
    big_n = len(prob.family)

    if math.isinf(p):
        t = max(float(np.abs(np.linalg.eigvalsh(x)).max()) for x in xs)
        a = t * np.eye(n)
        res = min(float(np.linalg.eigvalsh(a + s * x).min())
                  for x in xs for s in (-1.0, 1.0))
        return MaxNormCertificate(envelope=hermitian_element(a), objective=t,
                                  residual=res, gap=0.0, converged=True,
                                  newton_steps=0)

    sup_norms = [float(np.abs(np.linalg.eigvalsh(x)).max()) for x in xs]
    scale = max(sup_norms)
    if scale == 0.0:
        zero = hermitian_element(np.zeros((n, n)))
        return MaxNormCertificate(envelope=zero, objective=0.0, residual=0.0,
                                  gap=0.0, converged=True, newton_steps=0)

    # Strictly feasible start: the sum of moduli dominates every |x_j|.
    a = sum(_matrix_abs(x) for x in xs) + (tol * scale) * np.eye(n)

    basis = _hermitian_basis(n)
    nu = 2.0 * big_n * n          # total barrier degree, controls the gap
    mu = float((np.linalg.eigvalsh(a) ** p).sum()) / nu
    steps = 0
    converged = False

    while True:
        # Newton centering at the current mu.
        for _ in range(60):
            if steps >= newton_budget:
                break
            lam, vecs = np.linalg.eigh(a)
            grad = (vecs * (p * lam ** (p - 1.0))) @ vecs.conj().T
            yinvs = []
            for x in xs:
                for sgn in (-1.0, 1.0):
                    y = a + sgn * x
                    y = 0.5 * (y + y.conj().T)
                    yinv = np.linalg.inv(y)
                    yinvs.append(0.5 * (yinv + yinv.conj().T))
                    grad = grad - mu * yinvs[-1]

            coeff = np.einsum("kab,ba->k", basis, grad).real

            f1 = _divided_differences(lam, p)
            cbs = np.einsum("ia,kab,bj->kij", vecs.conj().T, basis, vecs)
            hess = p * np.einsum("kij,lij,ij->kl", cbs, cbs.conj(), f1).real
            for yinv in yinvs:
                t_k = np.einsum("ab,kbc,cd->kad", yinv, basis, yinv)
                hess = hess + mu * np.einsum("kab,lba->kl", t_k, basis).real
            hess = 0.5 * (hess + hess.T)

            try:
                delta = np.linalg.solve(hess, -coeff)
            except np.linalg.LinAlgError:
                delta = np.linalg.lstsq(hess, -coeff, rcond=None)[0]
            decrement_sq = float(-coeff @ delta)
            if decrement_sq <= 0.0:
                break
            step_mat = np.einsum("k,kab->ab", delta, basis)

            f0 = _barrier_value(a, xs, p, mu)
            slope = float(coeff @ delta)
            s = 1.0
            while s > 1e-14:
                cand = a + s * step_mat
                if _feasible(cand, xs):
                    if _barrier_value(cand, xs, p, mu) <= f0 + ARMIJO * s * slope:
                        break
                s *= SHRINK
            a = a + s * step_mat
            a = 0.5 * (a + a.conj().T)
            steps += 1
            if decrement_sq <= 1e-12 * (1.0 + abs(f0)):
                break

        tr_val = float((np.linalg.eigvalsh(a) ** p).sum())
        gap_tr = mu * nu
        obj = tr_val ** (1.0 / p)
        gap = obj - max(tr_val - gap_tr, 0.0) ** (1.0 / p)
        if gap <= tol * obj:
            converged = True
            break
        if steps >= newton_budget:
            break
        mu *= 0.125

    res = min(float(np.linalg.eigvalsh(0.5 * ((a + s * x) + (a + s * x).conj().T)).min())
              for x in xs for s in (-1.0, 1.0))
    return MaxNormCertificate(envelope=hermitian_element(a),
                              objective=schatten_norm(hermitian_element(a), p),
                              residual=res, gap=gap, converged=converged,
                              newton_steps=steps)


def _matrix_abs(x: np.ndarray) -> np.ndarray:
    lam, vecs = np.linalg.eigh(x)
    return (vecs * np.abs(lam)) @ vecs.conj().T


def ncmax_diag_oracle(prob: MaxNormProblem) -> float:
    """Exact value for simultaneously diagonal families.

    Pinching any feasible envelope onto the diagonal preserves the order
    constraints and never increases the p-norm, so the optimum is the p-norm
    of the entrywise maximum diag_i(max_j |x_j[i,i]|).
    """
    diag_cols = []
    for x in prob.family:
        off = x.entries - np.diag(np.diag(x.entries))
        if np.abs(off).max() > 1e-10 * max(1.0, np.abs(x.entries).max()):
            raise ValueError("family is not simultaneously diagonal")
        diag_cols.append(np.diag(x.entries).real)
    env = np.abs(np.stack(diag_cols)).max(axis=0)
    return schatten_norm(hermitian_element(np.diag(env)), prob.p)


def ncmax_grid_oracle_2x2(prob: MaxNormProblem, stages: int = 12,
                          points: int = 15) -> float:
    """Brute-force optimum for n = 2 by staged grid refinement.

    A hermitian 2x2 envelope is four reals (a11, a22, Re a12, Im a12).  Each
    stage scans a grid over the current box, keeps the best feasible point,
    and shrinks the box around it.  Feasibility of a 2x2 order constraint is
    exact: trace >= 0 and determinant >= 0.
    """
    if prob.n != 2:
        raise ValueError("grid oracle only covers n = 2")
    xs = np.stack([x.entries for x in prob.family])
    radius = sum(float(np.abs(np.linalg.eigvalsh(x)).max()) for x in xs)

    center = np.array([radius, radius, 0.0, 0.0])
    half = np.array([radius, radius, radius, radius])
    best = math.inf
    slack = 1e-12 * max(radius, 1.0)

    for _ in range(stages):
        axes = [np.linspace(c - h, c + h, points) for c, h in zip(center, half)]
        g11, g22, gre, gim = np.meshgrid(*axes, indexing="ij")
        g11, g22, gre, gim = (g.ravel() for g in (g11, g22, gre, gim))

        ok = np.ones(g11.shape, dtype=bool)
        for x in xs:
            for sgn in (-1.0, 1.0):
                y11 = g11 + sgn * x[0, 0].real
                y22 = g22 + sgn * x[1, 1].real
                yre = gre + sgn * x[0, 1].real
                yim = gim + sgn * x[0, 1].imag
                tr = y11 + y22
                det = y11 * y22 - (yre * yre + yim * yim)
                ok &= (tr >= -slack) & (det >= -slack)
        if not ok.any():
            half = half * 1.5
            continue

        tr = g11 + g22
        det = g11 * g22 - (gre * gre + gim * gim)
        disc = np.sqrt(np.maximum(0.25 * tr * tr - det, 0.0))
        e1 = np.abs(0.5 * tr + disc)
        e2 = np.abs(0.5 * tr - disc)
        if math.isinf(prob.p):
            val = np.maximum(e1, e2)
        else:
            val = (e1 ** prob.p + e2 ** prob.p) ** (1.0 / prob.p)
        val = np.where(ok, val, math.inf)
        k = int(val.argmin())
        if val[k] < best:
            best = float(val[k])
        center = np.array([g11[k], g22[k], gre[k], gim[k]])
        half = half * (2.2 / (points - 1))
    return best
