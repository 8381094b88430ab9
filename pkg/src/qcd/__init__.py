"""Exact pathwise coordinate descent for penalized quantile regression."""

from .bench import BenchReport, run_benchmark, run_cell
from .coord import (BreakpointProfile, build_profile, coord_min, coord_min_l1,
                    coord_min_nonconvex, kkt_zero_check, make_profile)
from .core import Dataset, PathConfig, PenaltySpec, check_loss, objective, penalty_value
from .demo import demo_exact_vs_approx
from .oracle import oracle_coord_min
from .path import SolutionPath, cd_sweep, lambda_grid, lambda_max, nudge, solve_path, solve_single
from .qicd import WeightedSample, qicd_solve_path, qicd_update, weighted_median
from .sim import OnlineStop, SimSpec, auroc, generate_dataset, rmse, stopping_rule

__version__ = "0.1.0"

__all__ = [
    "BenchReport", "BreakpointProfile", "Dataset", "OnlineStop", "PathConfig", "PenaltySpec",
    "SimSpec", "SolutionPath", "WeightedSample", "auroc", "build_profile", "cd_sweep",
    "check_loss", "coord_min", "coord_min_l1", "coord_min_nonconvex", "demo_exact_vs_approx",
    "generate_dataset", "kkt_zero_check", "lambda_grid", "lambda_max", "make_profile",
    "nudge", "objective", "oracle_coord_min", "penalty_value", "qicd_solve_path",
    "qicd_update", "rmse", "run_benchmark", "run_cell", "solve_path", "solve_single",
    "stopping_rule", "weighted_median",
]
