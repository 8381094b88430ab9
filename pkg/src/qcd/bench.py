"""Benchmark runner comparing exact and frozen-weight coordinate descent."""

from __future__ import annotations

import json
import os
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence

import numpy as np

from .core import PathConfig
from .path import lambda_grid, solve_path
from .qicd import qicd_solve_path
from .sim import OnlineStop, SimSpec, auroc, generate_dataset

METHODS = ("qcd", "qicd")
VARIANTS = ("vanilla", "warm", "warm_nudge")
SUMMARY_COLUMNS = ("method", "variant", "p", "n", "mean_time_s", "sd_time_s",
                   "mean_min_rmse", "sd_min_rmse", "mean_auroc", "sd_auroc")


def variant_config(variant: str, grid, nudge_sigma: float = 0.1, seed: int = 0,
                   tol: float = 1e-7, max_sweeps: int = 500, screen: bool = True) -> PathConfig:
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    return PathConfig(grid=grid, warm_start=variant != "vanilla",
                      nudge_sigma=nudge_sigma if variant == "warm_nudge" else 0.0,
                      seed=seed, tol=tol, max_sweeps=max_sweeps, screen=screen)


@dataclass
class BenchReport:
    """Per-cell records plus the settings that produced them."""

    config: dict
    cells: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    def summary(self) -> list:
        """Mean and sd per (method, variant, p, n); sd is None for single cells."""
        groups = {}
        for c in self.cells:
            groups.setdefault((c["method"], c["variant"], c["p"], c["n"]), []).append(c)
        rows = []
        for (method, variant, p, n), cells in sorted(groups.items()):
            row = dict(method=method, variant=variant, p=p, n=n)
            for key, name in (("time", "time_s"), ("min_rmse", "min_rmse"), ("auroc", "auroc")):
                vals = np.array([c[key] for c in cells], dtype=np.float64)
                row[f"mean_{name}"] = float(vals.mean())
                row[f"sd_{name}"] = float(vals.std(ddof=1)) if vals.size > 1 else None
            rows.append(row)
        return rows

    def to_dict(self) -> dict:
        return dict(config=self.config, cells=self.cells, errors=self.errors,
                    summary=self.summary())

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=1)

    @classmethod
    def from_json(cls, path) -> "BenchReport":
        with open(path) as fh:
            data = json.load(fh)
        return cls(data["config"], data["cells"], data["errors"])

    def cell(self, method, variant, p, seed):
        for c in self.cells:
            if (c["method"], c["variant"], c["p"], c["seed"]) == (method, variant, p, seed):
                return c
        raise KeyError((method, variant, p, seed))


def _nudge_seed(seed: int, p: int, variant: str) -> int:
    ss = np.random.SeedSequence([seed, p, VARIANTS.index(variant)])
    return int(ss.generate_state(1)[0])


def run_cell(method: str, variant: str, p: int, n: int, seed: int, tau: float = 0.3,
             use_stopping_rule: bool = False, grid_len: int = 100,
             min_ratio: Optional[float] = None, nudge_sigma: float = 0.1,
             tol: float = 1e-7, max_sweeps: int = 500, screen: bool = True,
             grid=None) -> dict:
    """Generate one data set, solve one path and score it."""
    data, truth = generate_dataset(SimSpec(p=p, n=n, tau=tau, seed=seed))
    if grid is None:
        grid = lambda_grid(data, tau, grid_len, min_ratio)
    config = variant_config(variant, grid, nudge_sigma, _nudge_seed(seed, p, variant),
                            tol, max_sweeps, screen)
    stop = OnlineStop(truth.beta_true, use_stopping_rule)
    t0 = time.perf_counter()
    if method == "qcd":
        path = solve_path(data, tau, "l1", config, stop=stop)
    elif method == "qicd":
        path = qicd_solve_path(data, tau, config, stop=stop)
    else:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    elapsed = time.perf_counter() - t0
    curve = stop.curve
    best = int(np.argmin(curve))
    return dict(
        method=method, variant=variant, p=p, n=n, seed=seed, tau=tau,
        time=elapsed,
        lambdas=[float(v) for v in path.lambdas],
        rmse=[float(v) for v in curve],
        objective=[d["objective"] for d in path.diagnostics],
        sweeps=[d["sweeps"] for d in path.diagnostics],
        converged=[d["converged"] for d in path.diagnostics],
        screened=[d["screened"] for d in path.diagnostics],
        visits=[d["visits"] for d in path.diagnostics],
        min_rmse=float(curve[best]),
        min_index=best,
        auroc=auroc(path.betas[best], truth.support),
        stop_index=stop.index,
        n_solved=len(path),
        beta_at_min=[float(v) for v in path.betas[best]],
    )


def _safe_cell(kwargs):
    try:
        return kwargs, run_cell(**kwargs), None
    except Exception as exc:  # recorded per cell, never fatal
        return kwargs, None, "".join(traceback.format_exception_only(type(exc), exc)).strip()


def warm_up() -> None:
    """Compile the kernels so the first timed cell does not pay for it."""
    run_cell("qcd", "warm_nudge", 20, 10, 0, grid_len=3)
    run_cell("qicd", "warm_nudge", 20, 10, 0, grid_len=3)


def run_benchmark(dims: Sequence[int] = (100, 300, 500), seeds: Sequence[int] = range(1, 21),
                  tau: float = 0.3, methods: Sequence[str] = ("qcd", "qicd"),
                  variants: Sequence[str] = ("warm_nudge",), use_stopping_rule: bool = False,
                  n: int = 300, grid_len: int = 100, min_ratio: Optional[float] = None,
                  nudge_sigma: float = 0.1, tol: float = 1e-7, max_sweeps: int = 500,
                  screen: bool = True, jobs: int = 1) -> BenchReport:
    """Run every (method, variant, p, seed) cell and collect the records.

    Cells are independent; ``jobs > 1`` spreads them over worker
    processes. A failing cell is logged under ``errors``.
    """
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}; expected one of {METHODS}")
    for v in variants:
        if v not in VARIANTS:
            raise ValueError(f"unknown variant {v!r}; expected one of {VARIANTS}")
    config = dict(dims=list(dims), seeds=list(seeds), tau=tau, methods=list(methods),
                  variants=list(variants), use_stopping_rule=use_stopping_rule, n=n,
                  grid_len=grid_len, min_ratio=min_ratio, nudge_sigma=nudge_sigma,
                  tol=tol, max_sweeps=max_sweeps, screen=screen)
    tasks = [dict(method=m, variant=v, p=p, n=n, seed=s, tau=tau,
                  use_stopping_rule=use_stopping_rule, grid_len=grid_len,
                  min_ratio=min_ratio, nudge_sigma=nudge_sigma, tol=tol,
                  max_sweeps=max_sweeps, screen=screen)
             for p, s, v, m in product(dims, seeds, variants, methods)]
    report = BenchReport(config)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs, initializer=warm_up) as pool:
            results = list(pool.map(_safe_cell, tasks))
    else:
        warm_up()
        results = [_safe_cell(t) for t in tasks]
    for kwargs, cell, err in results:
        if err is None:
            report.cells.append(cell)
        else:
            report.errors.append(dict(kwargs, error=err))
    return report


def default_jobs() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)
