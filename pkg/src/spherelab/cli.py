"""Command-line interface.

Every subcommand prints an RFC-4180 CSV table (complex values as re/im
column pairs) to stdout or, with --out, to a file.  Commands that carry
assertions (farey, ncmax, transfer, verify, experiment) exit nonzero when
any assertion fails, so the exit code is usable in scripts.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path

import numpy as np

from .acceptance import run_criteria, suite_names
from .arcs import approx_total, exact_multiplier_many
from .cache import load_or_enumerate
from .errors import ConfigError
from .experiments import (TRANSFER_THETAS, ExperimentConfig, load_config,
                          random_hermitian_probe, read_ncmax_problem,
                          run_experiment)
from .farey import farey_sequence, major_arcs, verify_partition
from .gauss import gauss_magnitude_bound, gauss_sum
from .lattice import DEFAULT_POINT_BUDGET, rep_counts, sphere_shell
from .ncmax import MaxNormProblem, ncmax_norm, schatten_norm
from .transfer import (diagonal_phase_family, maximal_ratio_experiment,
                       truncation_identity_check)

_FOOTER = sys.stderr  # human-readable notes go here, tables to stdout/--out


def _write_csv(args, columns, rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    text = buf.getvalue()
    if args.out is not None:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _cell(v) -> str:
    if isinstance(v, bool):
        return str(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _parse_vector(text: str, d: int) -> np.ndarray:
    parts = [p for p in text.replace(",", " ").split() if p]
    if len(parts) != d:
        raise SystemExit(f"error: expected {d} comma-separated components, "
                         f"got {len(parts)} in {text!r}")
    return np.array([float(p) for p in parts])


def _cmd_rd(args) -> int:
    table = rep_counts(args.d, args.max_k)
    _write_csv(args, ("k", "count"), list(enumerate(table.counts)))
    return 0


def _cmd_shell(args) -> int:
    budget = args.budget if args.budget else DEFAULT_POINT_BUDGET
    if args.cache:
        shell = load_or_enumerate(args.d, args.k, args.cache, budget=budget)
    else:
        shell = sphere_shell(args.d, args.k, point_budget=budget)
    cols = tuple(f"x_{i + 1}" for i in range(args.d))
    _write_csv(args, cols, [tuple(int(v) for v in pt) for pt in shell.points])
    print(f"d={args.d} k={args.k} count={shell.count}", file=_FOOTER)
    return 0


def _cmd_farey(args) -> int:
    arcs = major_arcs(farey_sequence(args.order))
    ok = verify_partition(arcs)
    rows = [(a.center.numerator, a.center.denominator,
             a.left.numerator, a.left.denominator,
             a.right.numerator, a.right.denominator) for a in arcs]
    _write_csv(args, ("a", "q", "left_num", "left_den",
                      "right_num", "right_den"), rows)
    print(f"order={args.order} arcs={len(arcs)} partition_exact={ok}",
          file=_FOOTER)
    return 0 if ok else 1


def _cmd_gauss(args) -> int:
    if args.ell:
        l_vec = tuple(int(float(v)) for v in args.ell.replace(",", " ").split())
        d = len(l_vec)
    else:
        d = args.d
        l_vec = tuple([0] * d)
    if math.gcd(args.a, args.q) != 1:
        raise SystemExit(f"error: a/q = {args.a}/{args.q} is not reduced")
    val = gauss_sum(args.a, args.q, l_vec)
    bound = gauss_magnitude_bound(args.q, d)
    normalized = abs(val) * args.q ** (d / 2.0)
    row = (args.a, args.q, *l_vec, val.real, val.imag, abs(val),
           normalized, bound)
    cols = ("a", "q", *(f"l_{i + 1}" for i in range(d)),
            "re", "im", "abs", "abs_normalized", "bound")
    _write_csv(args, cols, [row])
    return 0 if abs(val) <= bound + 1e-12 else 1


def _multiplier_rows(args, values, envelopes):
    cols = (*(f"xi_{i + 1}" for i in range(args.d)),
            "re", "im", "|value|", "bound_envelope")
    rows = []
    for xi, val, env in zip(args.xi_vectors, values, envelopes):
        val = complex(val)
        rows.append((*[float(v) for v in xi], val.real, val.imag,
                     abs(val), env))
    return cols, rows


def _cmd_mult(args) -> int:
    args.xi_vectors = [_parse_vector(t, args.d) for t in args.xi]
    shell = sphere_shell(args.d, args.k)
    values = exact_multiplier_many(shell, np.array(args.xi_vectors))
    # the exact multiplier is an average of unit phases
    cols, rows = _multiplier_rows(args, values, [1.0] * len(values))
    _write_csv(args, cols, rows)
    return 0


def _cmd_approx(args) -> int:
    args.xi_vectors = [_parse_vector(t, args.d) for t in args.xi]
    values, envs = [], []
    for xi in args.xi_vectors:
        res = approx_total(args.d, args.k, xi, q_max=args.q_max)
        values.append(res.value)
        envs.append(res.tail_bound)  # bound on the dropped q > q_max part
    cols, rows = _multiplier_rows(args, values, envs)
    _write_csv(args, cols, rows)
    return 0


def _cmd_ncmax(args) -> int:
    prob = read_ncmax_problem(args.input)
    if args.p is not None:
        prob = MaxNormProblem(p=args.p, family=prob.family)
    cert = ncmax_norm(prob, tol=args.tol)
    lower = max(schatten_norm(x, prob.p) for x in prob.family)
    _write_csv(args, ("n", "N", "p", "objective", "lower_bound", "residual",
                      "gap", "newton_steps", "converged"),
               [(prob.n, len(prob.family), prob.p, cert.objective, lower,
                 cert.residual, cert.gap, cert.newton_steps, cert.converged)])
    ok = cert.converged and cert.objective >= lower - args.tol * max(1.0, lower)
    return 0 if ok else 1


def _cmd_transfer(args) -> int:
    if args.theta:
        thetas = args.theta.replace(",", " ").split()
        if args.d is not None and args.d != len(thetas):
            raise SystemExit(f"error: --d {args.d} but {len(thetas)} thetas")
    else:
        d = args.d if args.d is not None else 5
        if d > len(TRANSFER_THETAS):
            raise SystemExit(f"error: give --theta explicitly for d > "
                             f"{len(TRANSFER_THETAS)}")
        thetas = TRANSFER_THETAS[:d]
    fam = diagonal_phase_family(thetas, n=args.n)
    seed = args.seed if args.seed is not None else 7
    x = random_hermitian_probe(args.n, seed)
    k_list = [lam * lam for lam in range(1, args.cap + 1)]
    rows = maximal_ratio_experiment(fam, x, k_list, args.p)
    _write_csv(args, ("K", "ratio", "lower_bound", "upper_bound",
                      "solver_gap"), rows)
    ok = all(rows[i + 1][1] >= rows[i][1] - rows[i][4] - rows[i + 1][4]
             for i in range(len(rows) - 1))
    ok = ok and all(r[1] - r[4] <= r[3] + 1e-9 for r in rows)
    if args.window is not None:
        dev = truncation_identity_check(fam, x, args.window, args.cap ** 2)
        print(f"truncation_identity_deviation = {dev!r}", file=_FOOTER)
        ok = ok and dev < 1e-10
    return 0 if ok else 1


def _cmd_verify(args) -> int:
    names = args.suite if args.suite else None
    unknown = set(names or []) - set(suite_names())
    if unknown:
        raise SystemExit(f"error: unknown suite(s) {sorted(unknown)}; "
                         f"choose from {suite_names()}")
    results = run_criteria(names)
    for res in results:
        line_details = {k: v for k, v in res.details.items() if k != "csv"}
        res_display = type(res)(res.number, res.name, res.passed,
                                line_details, res.wall_time)
        print(res_display.summary_line())
    n_pass = sum(r.passed for r in results)
    print(f"{n_pass}/{len(results)} criteria passed")
    return 0 if n_pass == len(results) else 1


def _cmd_experiment(args) -> int:
    if args.action != "run":
        raise SystemExit("error: only 'experiment run <file>' is supported")
    try:
        cfg = load_config(args.file)
    except ConfigError as exc:
        raise SystemExit(f"error: {exc}") from None
    if args.out is not None:
        cfg = ExperimentConfig(cfg.kind, cfg.parameters, Path(args.out))
    if args.seed is not None and "seed" in cfg.parameters:
        merged = dict(cfg.parameters)
        merged["seed"] = args.seed
        cfg = ExperimentConfig(cfg.kind, merged, cfg.output)
    report = run_experiment(cfg)
    sys.stdout.write(report.report_text())
    if cfg.output is None:
        sys.stdout.write(report.csv_text())
    print(f"wall_time = {report.wall_time:.3f}s", file=_FOOTER)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spherelab",
        description="Numerical laboratory for lattice sphere averages, "
                    "rational-arc multipliers, matrix maximal norms, and "
                    "automorphism transference.")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the RNG seed where one is used")
    parser.add_argument("--budget", type=int, default=None,
                        help="resource budget for enumeration/summation")
    parser.add_argument("--out", type=str, default=None,
                        help="write the CSV table to this path")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rd", help="representation-count table")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--max-k", type=int, required=True)
    p.set_defaults(func=_cmd_rd)

    p = sub.add_parser("shell", help="integer points on a sphere shell")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--cache", type=str, default=None,
                   help="cache directory (read hit or write after enumerating)")
    p.set_defaults(func=_cmd_shell)

    p = sub.add_parser("farey", help="major-arc partition table")
    p.add_argument("--order", type=int, required=True)
    p.set_defaults(func=_cmd_farey)

    p = sub.add_parser("gauss", help="normalized quadratic exponential sum")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, default=5)
    p.add_argument("--ell", type=str, default=None,
                   help="comma-separated integer offset vector")
    p.set_defaults(func=_cmd_gauss)

    p = sub.add_parser("mult", help="exact shell multiplier at frequencies")
    p.add_argument("--d", type=int, default=5)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--xi", action="append", required=True,
                   help="comma-separated frequency vector (repeatable)")
    p.set_defaults(func=_cmd_mult)

    p = sub.add_parser("approx", help="rational approximant of the multiplier")
    p.add_argument("--d", type=int, default=5)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q-max", type=int, default=30)
    p.add_argument("--xi", action="append", required=True,
                   help="comma-separated frequency vector (repeatable)")
    p.set_defaults(func=_cmd_approx)

    p = sub.add_parser("ncmax", help="matrix maximal-norm solver")
    p.add_argument("--input", type=str, required=True,
                   help="problem file: 'n N p' then N blocks of n rows")
    p.add_argument("--p", type=float, default=None,
                   help="override the p recorded in the file")
    p.add_argument("--tol", type=float, default=1e-7)
    p.set_defaults(func=_cmd_ncmax)

    p = sub.add_parser("transfer", help="automorphism maximal-ratio table")
    p.add_argument("--n", type=int, default=2, help="matrix dimension")
    p.add_argument("--d", type=int, default=None,
                   help="number of commuting unitaries")
    p.add_argument("--J", dest="window", type=int, default=None,
                   help="also check the truncation identity on this window")
    p.add_argument("--cap", type=int, default=4,
                   help="radii 1..cap give the rows K = 1, 4, ..., cap^2")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--theta", type=str, default=None,
                   help="comma-separated phases, fractions ok (1/3,1/5,...)")
    p.set_defaults(func=_cmd_transfer)

    p = sub.add_parser("verify", help="run the acceptance criteria")
    p.add_argument("--suite", action="append", default=None,
                   help=f"criterion name (repeatable); one of {suite_names()}")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("experiment", help="run a config-file experiment")
    p.add_argument("action", choices=("run",))
    p.add_argument("file", type=str)
    p.set_defaults(func=_cmd_experiment)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
