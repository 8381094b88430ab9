"""Pathwise coordinate descent over a decreasing penalty grid."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _kernels as K
from .core import Dataset, PathConfig, PenaltySpec, objective, validate_tau


@dataclass
class SolutionPath:
    """Converged coefficients for each penalty value of the grid.

    ``betas[k]`` is the solution at ``lambdas[k]``. ``diagnostics[k]`` holds
    sweeps, convergence flag, screened and total coordinate visits, wall
    time and objective for that value. A path cut short by a stopping
    callback holds fewer rows than ``grid``.
    """

    lambdas: np.ndarray
    betas: np.ndarray
    diagnostics: list = field(default_factory=list)
    grid: Optional[np.ndarray] = None
    method: str = "qcd"
    penalty: str = "l1"

    def __len__(self):
        return len(self.lambdas)

    @property
    def screened_fraction(self) -> float:
        visits = sum(d["visits"] for d in self.diagnostics)
        if visits == 0:
            return 0.0
        return sum(d["screened"] for d in self.diagnostics) / visits


@dataclass
class FitState:
    """Working iterate with the cached residual ``y - X @ beta``."""

    beta: np.ndarray
    resid: np.ndarray
    rng: Optional[np.random.Generator] = None

    @classmethod
    def start(cls, dataset: Dataset, beta=None, seed=None) -> "FitState":
        if beta is None:
            beta = np.zeros(dataset.p)
        beta = np.array(beta, dtype=np.float64)
        if beta.shape != (dataset.p,):
            raise ValueError(f"beta has shape {beta.shape}, expected ({dataset.p},)")
        resid = dataset.y - dataset.x @ beta
        return cls(beta, np.ascontiguousarray(resid), np.random.default_rng(seed))

    def reset(self, dataset: Dataset, beta) -> None:
        self.beta[:] = beta
        self.resid[:] = dataset.y - dataset.x @ self.beta

    def residual_error(self, dataset: Dataset) -> float:
        """Largest relative drift of the cached residual from a fresh one."""
        fresh = dataset.y - dataset.x @ self.beta
        scale = max(1.0, float(np.max(np.abs(fresh))))
        return float(np.max(np.abs(fresh - self.resid))) / scale


def _kind(penalty: PenaltySpec) -> tuple:
    return K.KIND[penalty.kind], (0.0 if penalty.a is None else penalty.a)


def column_slopes(dataset: Dataset, tau: float) -> np.ndarray:
    return np.array([K.base_slope(dataset.x[:, j], tau) for j in range(dataset.p)])


def lambda_max(dataset: Dataset, tau: float) -> float:
    """Smallest penalty at which the zero check passes for every column at 0."""
    tau = validate_tau(tau)
    slopes = column_slopes(dataset, tau)
    out = 0.0
    for j in range(dataset.p):
        xj = dataset.x[:, j]
        keep = xj != 0.0
        v = np.ascontiguousarray(dataset.y[keep] / xj[keep])
        out = max(out, K.kkt_threshold(v, np.abs(xj[keep]), v.size, slopes[j]))
    return out


def lambda_grid(dataset: Dataset, tau: float, L: int = 100,
                min_ratio: Optional[float] = None) -> np.ndarray:
    """Log-spaced grid from ``lambda_max`` down to ``min_ratio * lambda_max``.

    ``min_ratio`` defaults to 0.01 when n > p and 0.05 otherwise. ``L=1``
    gives the single value ``lambda_max``.
    """
    if L < 1:
        raise ValueError("grid length must be >= 1")
    if min_ratio is None:
        min_ratio = 0.01 if dataset.n > dataset.p else 0.05
    if not 0.0 < min_ratio < 1.0:
        raise ValueError("min_ratio must lie in (0, 1)")
    top = lambda_max(dataset, tau)
    if top <= 0.0:
        raise ValueError("lambda_max is 0: the zero vector is already optimal for every penalty")
    if L == 1:
        return np.array([top])
    return np.geomspace(top, min_ratio * top, L)


def _run(state, dataset, tau, penalty, tol, max_sweeps, screen, slopes, approx=False):
    kind, a = _kind(penalty)
    lam = penalty.lam / dataset.n if approx else penalty.lam
    sweeps, converged, screened, visits, change = K.solve(
        dataset.x, state.resid, state.beta, tau, lam, a, kind, screen, slopes,
        tol, max_sweeps, approx)
    return dict(sweeps=int(sweeps), converged=bool(converged), screened=int(screened),
                visits=int(visits), max_change=float(change))


def cd_sweep(state: FitState, dataset: Dataset, tau: float, penalty: PenaltySpec,
             screen: bool = True, slopes=None):
    """One cyclic pass over the coordinates, updating ``state`` in place.

    Returns ``(state, max_change)``.
    """
    tau = validate_tau(tau)
    if slopes is None:
        slopes = column_slopes(dataset, tau)
    info = _run(state, dataset, tau, penalty, np.inf, 1, screen, slopes)
    return state, info["max_change"]


def solve_single(dataset: Dataset, tau: float, penalty: PenaltySpec, init=None,
                 tol: float = 1e-7, max_sweeps: int = 500, screen: bool = True):
    """Sweep from ``init`` until the largest change is below ``tol``.

    Non-convergence is reported in the diagnostics, not raised.
    Returns ``(beta, diagnostics)``.
    """
    tau = validate_tau(tau)
    if not tol > 0:
        raise ValueError("tol must be > 0")
    state = FitState.start(dataset, init)
    t0 = time.perf_counter()
    info = _run(state, dataset, tau, penalty, tol, max_sweeps, screen,
                column_slopes(dataset, tau))
    info["time"] = time.perf_counter() - t0
    info["objective"] = objective(dataset, state.beta, tau, penalty)
    return state.beta, info


def nudge(beta, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """``beta`` plus independent N(0, sigma**2) noise on every coordinate."""
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    beta = np.asarray(beta, dtype=np.float64)
    if sigma == 0:
        return beta.copy()
    return beta + rng.normal(0.0, sigma, size=beta.shape)


def _path(dataset, tau, penalty_kind, config, approx, stop):
    tau = validate_tau(tau)
    grid = config.grid
    if grid is None:
        grid = lambda_grid(dataset, tau, config.grid_len, config.min_ratio)
    grid = np.asarray(grid, dtype=np.float64)
    a = config.a if penalty_kind != "l1" else None
    base = PenaltySpec(penalty_kind, 0.0, a)
    slopes = column_slopes(dataset, tau)
    max_sweeps = 1 if config.single_sweep else config.max_sweeps
    state = FitState.start(dataset, seed=config.seed)

    lambdas, betas, diags = [], [], []
    prev = np.zeros(dataset.p)
    for k, lam in enumerate(grid):
        if k == 0 or not config.warm_start:
            start = np.zeros(dataset.p)
        else:
            start = nudge(prev, config.nudge_sigma, state.rng)
        pen = base.with_lambda(lam)
        if k > 0 and config.warm_start and lam == grid[k - 1] and np.array_equal(start, prev):
            # same problem, same start: the previous solution is the answer
            info = dict(diags[-1], sweeps=0, screened=0, visits=0, max_change=0.0, time=0.0)
        else:
            if k == 0 or not np.array_equal(start, state.beta):
                state.reset(dataset, start)
            t0 = time.perf_counter()
            info = _run(state, dataset, tau, pen, config.tol, max_sweeps, config.screen,
                        slopes, approx)
            info["time"] = time.perf_counter() - t0
            info["objective"] = objective(dataset, state.beta, tau, pen)
        prev = state.beta.copy()
        lambdas.append(lam)
        betas.append(prev)
        diags.append(info)
        if stop is not None and stop(k, prev):
            break
    return SolutionPath(np.array(lambdas), np.array(betas).reshape(len(betas), dataset.p),
                        diags, grid, "qicd" if approx else "qcd", penalty_kind)


def solve_path(dataset: Dataset, tau: float, penalty_kind: str = "l1",
               config: Optional[PathConfig] = None,
               stop: Optional[Callable[[int, np.ndarray], bool]] = None) -> SolutionPath:
    """Exact coordinate descent along the grid, largest penalty first.

    With ``warm_start`` each solve starts from the previous converged
    solution plus a Gaussian nudge of scale ``nudge_sigma``; the stored
    solutions are never nudged. Without it each solve starts from zero.
    ``stop(k, beta)`` is called after each solve and ends the path early
    when it returns True.
    """
    config = PathConfig() if config is None else config
    return _path(dataset, tau, penalty_kind.lower(), config, False, stop)
