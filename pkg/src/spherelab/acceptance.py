"""The twelve gating checks, runnable programmatically or via the CLI.

Each function performs one self-contained verification and returns a
CriterionResult with the measured quantities it judged.  Thresholds are
hard-coded on purpose: they are the contract, not tunables.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arcs import approx_total, arc_multiplier, exact_multiplier_many
from .experiments import TRANSFER_THETAS, decay_grid, random_hermitian_probe
from .farey import farey_sequence, major_arcs, verify_partition
from .gauss import gauss_dft
from .heat import heat_direct_batch, heat_multiplier_direct, \
    heat_multiplier_poisson, on_arc
from .lattice import box_counts_oracle, rep_counts, sphere_shell
from .ncmax import MaxNormProblem, hermitian_element, ncmax_diag_oracle, \
    ncmax_grid_oracle_2x2, ncmax_norm, schatten_norm
from .sphere import j_main, j_main_integral, sphere_ft_montecarlo, \
    sphere_ft_quadrature, unit_sphere_ft
from .transfer import diagonal_phase_family, maximal_ratio_experiment, \
    permutation_phase_family, truncation_identity_check


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    details: dict
    wall_time: float = 0.0

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        parts = " ".join(f"{k}={_short(v)}" for k, v in self.details.items())
        return f"[{status}] {self.number:02d} {self.name} ({self.wall_time:.1f}s): {parts}"


def _short(v) -> str:
    if isinstance(v, bool):
        return str(v)
    if isinstance(v, float):
        return f"{v:.4g}"
    return str(v)


def criterion_01_farey_partition() -> CriterionResult:
    """Exact cover of [0,1] by arcs, plus Farey neighbor identities."""
    cover_ok = all(verify_partition(major_arcs(farey_sequence(order)))
                   for order in range(1, 51))
    neighbor_ok = True
    for order in range(1, 201):
        fr = farey_sequence(order).fractions
        for left, right in zip(fr, fr[1:]):
            det = right.numerator * left.denominator \
                - left.numerator * right.denominator
            if det != 1 or left.denominator + right.denominator <= order:
                neighbor_ok = False
                break
        if not neighbor_ok:
            break
    return CriterionResult(1, "farey-partition", cover_ok and neighbor_ok,
                           {"cover_orders": 50, "neighbor_orders": 200,
                            "cover_ok": cover_ok, "neighbor_ok": neighbor_ok})


def criterion_02_rep_counts() -> CriterionResult:
    """Shell counting table against brute-force box enumeration."""
    worst = 0
    for d in range(1, 6):
        table = rep_counts(d, 50).counts
        brute = box_counts_oracle(d, 50)
        worst = max(worst, max(abs(a - b) for a, b in zip(table, brute)))
    return CriterionResult(2, "rep-count-oracle", worst == 0,
                           {"d_max": 5, "k_max": 50, "max_abs_diff": worst})


def criterion_03_gauss_dft() -> CriterionResult:
    """DFT of the normalized complete sum is the pure quadratic phase."""
    rng = np.random.Generator(np.random.PCG64(0))
    ks = rng.integers(-10, 11, size=(20, 5))
    worst = 0.0
    for q in range(1, 26):
        for a in range(q):
            if math.gcd(a, q) != 1:
                continue
            for k in ks:
                kk = tuple(int(v) for v in k)
                phase = np.exp(2j * np.pi * ((sum(v * v for v in kk) * a) % q) / q)
                worst = max(worst, abs(gauss_dft(a, q, kk) - phase))
    return CriterionResult(3, "gauss-dft", worst < 1e-12,
                           {"q_max": 25, "k_samples": 20, "max_err": worst,
                            "tol": 1e-12})


def criterion_04_poisson_forms() -> CriterionResult:
    """Lattice sum vs image-sum resummation of the kernel transform."""
    worst = 0.0
    for d in (2, 3, 5):
        rng = np.random.Generator(np.random.PCG64(400 + d))
        for eps in (1.0, 0.25, 0.0625):
            for _ in range(20):
                q = int(rng.integers(1, 9))
                a = int(rng.integers(0, q))
                while math.gcd(a, q) != 1 and not (q == 1 and a == 0):
                    a = int(rng.integers(0, q))
                t = float(rng.uniform(-0.5, 0.5)) / (q * q)
                xi = rng.uniform(-0.5, 0.5, size=d)
                params = on_arc(eps, a, q, t)
                direct = complex(np.atleast_1d(
                    heat_multiplier_direct(params, xi, tol=1e-14).value)[0])
                image = complex(heat_multiplier_poisson(params, xi,
                                                        tol=1e-14).value)
                rel = abs(direct - image) / max(abs(direct), abs(image), 1e-300)
                worst = max(worst, rel)
    return CriterionResult(4, "poisson-forms", worst < 1e-8,
                           {"dims": "2,3,5", "draws_per_case": 20,
                            "max_rel_err": worst, "tol": 1e-8})


ENVELOPE_REL_OFFSETS = np.array([-0.9, -0.5, -0.2, 0.0, 0.2, 0.5, 0.9])


def _envelope_frequencies(d: int = 5) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(1))
    rational = np.array([[0.5, 0, 0, 0, 0],
                         [1 / 3, 1 / 3, 0, 0, 0],
                         [0.25, 0.5, 0, 0, 0]])
    return np.vstack([np.zeros((1, d)), rng.uniform(-0.5, 0.5, size=(12, d)),
                      rational])


def envelope_sup(order: int, d: int = 5) -> float:
    """Normalized kernel size q^{d/2} (order^-2 + |t|)^{d/2} |K|, maximized
    over a fixed arc/offset/frequency design that exists at every order."""
    eps = float(order) ** -2.0
    xis = _envelope_frequencies(d)
    arcs = [arc for arc in major_arcs(farey_sequence(order))
            if arc.center.denominator <= 2]
    sup = 0.0
    for arc in arcs:
        q = arc.center.denominator
        a = arc.center.numerator
        lo = float(arc.left - arc.center)
        hi = float(arc.right - arc.center)
        ts = np.where(ENVELOPE_REL_OFFSETS < 0,
                      -ENVELOPE_REL_OFFSETS * lo, ENVELOPE_REL_OFFSETS * hi)
        for t in ts:
            s = np.array([a / q + t])
            for xi in xis:
                val = abs(np.atleast_1d(
                    heat_direct_batch(eps, s, xi, tol=1e-10).value)[0])
                sup = max(sup, q ** (d / 2.0) * (eps + abs(t)) ** (d / 2.0) * val)
    return sup


def criterion_05_kernel_envelope() -> CriterionResult:
    """The normalized kernel sup must not grow as the order doubles twice."""
    sups = {order: envelope_sup(order) for order in (2, 4, 8)}
    growth_24 = sups[4] / sups[2]
    growth_48 = sups[8] / sups[4]
    ok = growth_24 <= 1.1 and growth_48 <= 1.1
    return CriterionResult(5, "kernel-envelope", ok,
                           {"sup_2": sups[2], "sup_4": sups[4],
                            "sup_8": sups[8], "growth_2_to_4": growth_24,
                            "growth_4_to_8": growth_48, "limit": 1.1})


def criterion_06_arc_reconstruction() -> CriterionResult:
    """Summing all arc pieces rebuilds the exact shell multiplier."""
    d, order = 5, 2
    eps = float(order) ** -2.0
    arcs = major_arcs(farey_sequence(order))
    rng = np.random.Generator(np.random.PCG64(0))
    xis = rng.uniform(-0.5, 0.5, size=(8, d))
    worst = 0.0
    for k in (1, 2, 4):
        shell = sphere_shell(d, k)
        exact = exact_multiplier_many(shell, xis)
        for xi, m_exact in zip(xis, exact):
            total = sum(arc_multiplier(d, k, arc, xi, eps) for arc in arcs)
            worst = max(worst, abs(total - complex(m_exact)))
    return CriterionResult(6, "arc-reconstruction", worst < 1e-6,
                           {"d": 5, "ks": "1,2,4", "order": order,
                            "frequencies": 8, "max_err": worst, "tol": 1e-6})


def criterion_07_sphere_ft() -> CriterionResult:
    """Bessel closed form vs quadrature, Monte Carlo, and pinned values."""
    worst_quad = 0.0
    worst_mc = 0.0
    for d in (3, 5):
        rhos = [0.1, 0.5, 1.0, 2.0, 3.0] if d == 5 else [0.1, 0.5, 1.0, 2.0, 5.0]
        for rho in rhos:
            xi = np.zeros(d)
            xi[0] = rho
            if d == 3:
                n_polar = max(32, 24 * math.ceil(rho))
            else:
                n_polar = min(48, 32 + 8 * max(0, math.ceil(rho) - 1))
            quad = sphere_ft_quadrature(d, xi, n_polar=n_polar,
                                        n_azimuth=3 * n_polar)
            worst_quad = max(worst_quad, abs(quad - float(unit_sphere_ft(d, rho))))
        mc = sphere_ft_montecarlo(d, 1.0, n_samples=1_000_000, seed=0)
        worst_mc = max(worst_mc, abs(mc - float(unit_sphere_ft(d, 1.0))))
    at_zero = float(unit_sphere_ft(5, 0.0))
    pin = abs(float(unit_sphere_ft(5, 1.0)) + 3.0 / (4.0 * math.pi ** 2))
    ok = worst_quad < 1e-8 and worst_mc < 1e-3 and at_zero == 1.0 and pin < 1e-10
    return CriterionResult(7, "sphere-ft-oracle", ok,
                           {"max_quad_err": worst_quad, "max_mc_err": worst_mc,
                            "value_at_zero": at_zero, "pinned_d5_err": pin})


def criterion_08_mainterm_identity() -> CriterionResult:
    """Full-line oscillatory integral equals the closed main-term formula,
    independently of the Gaussian width."""
    d = 5
    xis = [np.zeros(d), np.array([0.2, 0.1, 0.0, 0.0, 0.0]),
           np.array([0.3, -0.25, 0.15, 0.05, 0.1])]
    worst_closed = 0.0
    worst_eps = 0.0
    for k in (1, 4):
        for xi in xis:
            closed = j_main(d, k, xi)
            vals = []
            for eps in (0.25, 0.0625):
                val, _ = j_main_integral(d, k, xi, eps)
                vals.append(val)
                worst_closed = max(worst_closed,
                                   abs(val - closed) / max(1.0, abs(closed)))
            worst_eps = max(worst_eps, abs(vals[0] - vals[1]))
    ok = worst_closed < 1e-4 and worst_eps < 1e-4
    return CriterionResult(8, "mainterm-identity", ok,
                           {"d": 5, "ks": "1,4", "max_closed_err": worst_closed,
                            "max_eps_dependence": worst_eps, "tol": 1e-4})


def criterion_09_approx_decay() -> CriterionResult:
    """Scaled deviation between the exact multiplier and the rational
    approximation stays in a narrow band with the predicted slope."""
    orders = (2, 3, 4, 6, 8)
    grid = decay_grid()
    sups = []
    for order in orders:
        sup_dev = 0.0
        for lam in range(order, 2 * order):
            k = lam * lam
            shell = sphere_shell(5, k)
            exact = exact_multiplier_many(shell, grid)
            approx = np.array([approx_total(5, k, xi, q_max=30).value
                               for xi in grid])
            sup_dev = max(sup_dev, float(np.abs(exact - approx).max()))
        sups.append(sup_dev)
    normalized = [s * math.sqrt(o) for s, o in zip(sups, orders)]
    band = max(normalized) / min(normalized)
    slope = float(np.polyfit(np.log(orders), np.log(sups), 1)[0])
    ok = band <= 3.0 and -0.8 <= slope <= -0.2
    return CriterionResult(9, "approx-decay", ok,
                           {"orders": "2,3,4,6,8", "band": band,
                            "band_limit": 3.0, "loglog_slope": slope,
                            "slope_range": "[-0.8,-0.2]"})


def _random_diag_problem(rng) -> MaxNormProblem:
    n = int(rng.integers(1, 7))
    count = int(rng.integers(1, 9))
    p = float(rng.choice([1.0, 1.5, 2.0, math.inf]))
    family = tuple(hermitian_element(np.diag(rng.uniform(-3, 3, size=n)))
                   for _ in range(count))
    return MaxNormProblem(p=p, family=family)


def criterion_10_ncmax() -> CriterionResult:
    """Barrier solver against the pinching oracle, the 2x2 grid oracle,
    and its own certificate bounds."""
    rng = np.random.Generator(np.random.PCG64(10))
    worst_rel = 0.0
    sandwich_ok = True
    for _ in range(100):
        prob = _random_diag_problem(rng)
        cert = ncmax_norm(prob, tol=1e-7)
        oracle = ncmax_diag_oracle(prob)
        worst_rel = max(worst_rel, abs(cert.objective - oracle) / max(oracle, 1e-12))
        lower = max(schatten_norm(x, prob.p) for x in prob.family)
        upper = schatten_norm(
            hermitian_element(sum(_abs_entries(x.entries) for x in prob.family)),
            prob.p)
        if cert.objective < lower - 1e-7 * max(1.0, lower) or \
                cert.objective - cert.gap > upper + 1e-7 * max(1.0, upper):
            sandwich_ok = False
    sz = hermitian_element(np.diag([1.0, -1.0]))
    sx = hermitian_element(np.array([[0.0, 1.0], [1.0, 0.0]]))
    grid_errs = []
    for p in (2.0, math.inf):
        prob = MaxNormProblem(p=p, family=(sz, sx))
        grid = ncmax_grid_oracle_2x2(prob)
        solved = ncmax_norm(prob, tol=1e-7).objective
        grid_errs.append(abs(grid - solved) / max(grid, 1e-12))
    worst_grid = max(grid_errs)
    ok = worst_rel < 1e-5 and worst_grid < 1e-4 and sandwich_ok
    return CriterionResult(10, "ncmax-oracles", ok,
                           {"diag_problems": 100, "max_rel_err": worst_rel,
                            "grid_rel_err": worst_grid,
                            "sandwich_ok": sandwich_ok})


def _abs_entries(m: np.ndarray) -> np.ndarray:
    lam, vec = np.linalg.eigh(m)
    return (vec * np.abs(lam)) @ vec.conj().T


def criterion_11_transfer_identity() -> CriterionResult:
    """Orbit truncation reproduces automorphism averages exactly inside
    the guard window."""
    fam_a = diagonal_phase_family([float(t) for t in TRANSFER_THETAS], n=2)
    dev_a = truncation_identity_check(fam_a, random_hermitian_probe(2, 7),
                                      window=4, k_cap_sq=4)
    fam_b = permutation_phase_family()
    dev_b = truncation_identity_check(fam_b, random_hermitian_probe(3, 7),
                                      window=5, k_cap_sq=4)
    worst = max(dev_a, dev_b)
    return CriterionResult(11, "transfer-identity", worst < 1e-10,
                           {"dev_n2_d5": dev_a, "dev_n3_d3": dev_b,
                            "tol": 1e-10})


def criterion_12_ratio_table() -> CriterionResult:
    """Maximal-ratio trend table: monotone, certified below the summed
    envelope bound, exported as CSV."""
    fam = diagonal_phase_family([float(t) for t in TRANSFER_THETAS], n=2)
    x = random_hermitian_probe(2, 7)
    rows = maximal_ratio_experiment(fam, x, (1, 4, 9, 16), p=2.0, tol=1e-7)
    ratios = [r[1] for r in rows]
    monotone = all(rows[i + 1][1] >= rows[i][1] - rows[i][4] - rows[i + 1][4]
                   for i in range(len(rows) - 1))
    below = all(ratio - gap <= upper + 1e-9
                for _, ratio, _, upper, gap in rows)
    csv_lines = ["K,ratio,lower_bound,upper_bound,solver_gap"]
    csv_lines += [",".join(repr(float(v)) if i else str(int(v))
                           for i, v in enumerate(row)) for row in rows]
    csv_text = "\r\n".join(csv_lines) + "\r\n"
    ok = monotone and below and len(rows) == 4
    return CriterionResult(12, "ratio-table", ok,
                           {"ratios": ",".join(f"{r:.6f}" for r in ratios),
                            "monotone": monotone, "below_upper": below,
                            "csv": csv_text})


ALL_CRITERIA = (
    criterion_01_farey_partition,
    criterion_02_rep_counts,
    criterion_03_gauss_dft,
    criterion_04_poisson_forms,
    criterion_05_kernel_envelope,
    criterion_06_arc_reconstruction,
    criterion_07_sphere_ft,
    criterion_08_mainterm_identity,
    criterion_09_approx_decay,
    criterion_10_ncmax,
    criterion_11_transfer_identity,
    criterion_12_ratio_table,
)

def suite_names() -> list[str]:
    return ["farey-partition", "rep-count-oracle", "gauss-dft",
            "poisson-forms", "kernel-envelope", "arc-reconstruction",
            "sphere-ft-oracle", "mainterm-identity", "approx-decay",
            "ncmax-oracles", "transfer-identity", "ratio-table"]


def run_criteria(names=None) -> list[CriterionResult]:
    wanted = set(names) if names else None
    results = []
    for fn, name in zip(ALL_CRITERIA, suite_names()):
        if wanted is not None and name not in wanted:
            continue
        t0 = time.perf_counter()
        res = fn()
        res.wall_time = time.perf_counter() - t0
        results.append(res)
    return results
