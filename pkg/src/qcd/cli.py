"""Command-line interface: ``qcd {simulate,fit,path,bench,demo}``.

Exit codes: 0 success, 2 usage error, 3 data or parse error, 4 every
benchmark cell failed.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .bench import METHODS, VARIANTS, default_jobs, run_benchmark
from .core import PathConfig, PenaltySpec, objective
from .demo import demo_exact_vs_approx
from .formats import (DataError, read_dataset, write_bench, write_beta, write_dataset,
                      write_path, write_trace)
from .path import lambda_grid, solve_path, solve_single
from .sim import SimSpec, generate_dataset

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_ALL_FAILED = 0, 2, 3, 4


class UsageError(Exception):
    pass


def int_list(text: str) -> list:
    """Parse ``"1..20"``, ``"100,300"`` or a mix such as ``"1..3,7"``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return out


def name_list(choices):
    def parse(text: str) -> list:
        names = [t.strip().lower() for t in text.split(",") if t.strip()]
        bad = [t for t in names if t not in choices]
        if bad or not names:
            raise argparse.ArgumentTypeError(f"expected a comma list from {list(choices)}, got {text!r}")
        return names
    return parse


def float_list(text: str) -> list:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcd", description="Exact coordinate descent for penalized quantile regression.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out-dir", default=".", help="directory for output files")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tau", type=float, default=0.3)

    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--data-dir", default=None, help="directory holding X.csv and y.csv (default: --out-dir)")
    solver.add_argument("--penalty", choices=("l1", "scad", "mcp"), default="l1")
    solver.add_argument("--a", type=float, default=2.2, help="SCAD/MCP shape parameter")
    solver.add_argument("--tol", type=float, default=1e-7)
    solver.add_argument("--max-sweeps", type=int, default=500)

    path_opts = argparse.ArgumentParser(add_help=False)
    path_opts.add_argument("--grid-len", type=int, default=100)
    path_opts.add_argument("--min-ratio", type=float, default=None)
    path_opts.add_argument("--nudge", type=float, default=0.1, help="sd of the warm-start nudge; 0 disables")

    p = sub.add_parser("simulate", parents=[common], help="write a simulated data set")
    p.add_argument("--p", type=int, default=100)
    p.add_argument("--n", type=int, default=300)

    p = sub.add_parser("fit", parents=[common, solver], help="solve at one penalty value")
    p.add_argument("--lambda", dest="lam", type=float, required=True)

    p = sub.add_parser("path", parents=[common, solver, path_opts], help="solve a regularization path")
    p.add_argument("--lambda", dest="lam", type=float_list, default=None,
                   help="explicit comma-separated grid (overrides --grid-len)")
    p.add_argument("--single-sweep", action="store_true")
    p.add_argument("--no-warm", action="store_true")

    p = sub.add_parser("bench", parents=[common, path_opts], help="run the simulation benchmark")
    p.add_argument("--dims", type=int_list, default=[100, 300, 500])
    p.add_argument("--seeds", type=int_list, default=list(range(1, 21)))
    p.add_argument("--n", type=int, default=300)
    p.add_argument("--methods", type=name_list(METHODS), default=list(METHODS))
    p.add_argument("--variants", type=name_list(VARIANTS), default=["warm_nudge"])
    p.add_argument("--stopping-rule", action="store_true")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: available CPUs)")
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--max-sweeps", type=int, default=500)

    p = sub.add_parser("demo", parents=[common], help="trace exact vs frozen-weight updates")
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    return parser


def _seed(args) -> int:
    env = os.environ.get("QCD_SEED")
    if env is None or env.strip() == "":
        return args.seed
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"QCD_SEED must be an integer, got {env!r}") from None


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot create output directory {out}: {exc.strerror}") from None
    return out


def _data(args):
    return read_dataset(args.data_dir if args.data_dir is not None else args.out_dir)


def cmd_simulate(args) -> int:
    data, truth = generate_dataset(SimSpec(p=args.p, n=args.n, tau=args.tau, seed=_seed(args)))
    write_dataset(_out_dir(args), data, truth.beta_true)
    return EXIT_OK


def cmd_fit(args) -> int:
    data = _data(args)
    pen = PenaltySpec(args.penalty, args.lam, None if args.penalty == "l1" else args.a)
    beta, info = solve_single(data, args.tau, pen, tol=args.tol, max_sweeps=args.max_sweeps)
    write_beta(_out_dir(args) / "beta.csv", beta)
    print(repr(objective(data, beta, args.tau, pen)))
    if not info["converged"]:
        print(f"warning: not converged after {info['sweeps']} sweeps", file=sys.stderr)
    return EXIT_OK


def cmd_path(args) -> int:
    data = _data(args)
    seed = _seed(args)
    grid = args.lam if args.lam is not None else lambda_grid(data, args.tau, args.grid_len, args.min_ratio)
    config = PathConfig(grid=grid, nudge_sigma=args.nudge, warm_start=not args.no_warm,
                        tol=args.tol, max_sweeps=args.max_sweeps, seed=seed,
                        single_sweep=args.single_sweep, a=args.a)
    path = solve_path(data, args.tau, args.penalty, config)
    meta = dict(tau=args.tau, n=data.n, p=data.p, seed=seed, a=args.a,
                nudge_sigma=args.nudge, warm_start=not args.no_warm, tol=args.tol,
                max_sweeps=args.max_sweeps, single_sweep=args.single_sweep)
    write_path(_out_dir(args), path, meta)
    return EXIT_OK


def cmd_bench(args) -> int:
    jobs = default_jobs() if args.jobs is None else args.jobs
    if jobs < 1:
        raise UsageError("--jobs must be >= 1")
    report = run_benchmark(dims=args.dims, seeds=args.seeds, tau=args.tau,
                           methods=args.methods, variants=args.variants,
                           use_stopping_rule=args.stopping_rule, n=args.n,
                           grid_len=args.grid_len, min_ratio=args.min_ratio,
                           nudge_sigma=args.nudge, tol=args.tol,
                           max_sweeps=args.max_sweeps, jobs=jobs)
    write_bench(_out_dir(args), report)
    for err in report.errors:
        print(f"cell failed: {err['method']} {err['variant']} p={err['p']} seed={err['seed']}: "
              f"{err['error']}", file=sys.stderr)
    if report.errors and not report.cells:
        return EXIT_ALL_FAILED
    return EXIT_OK


def cmd_demo(args) -> int:
    trace = demo_exact_vs_approx(_seed(args), tau=args.tau, lam=args.lam)
    write_trace(_out_dir(args) / "demo_trace.csv", trace)
    return EXIT_OK


COMMANDS = dict(simulate=cmd_simulate, fit=cmd_fit, path=cmd_path, bench=cmd_bench, demo=cmd_demo)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except DataError as exc:
        print(f"qcd {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (UsageError, ValueError) as exc:
        print(f"qcd {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"qcd {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
