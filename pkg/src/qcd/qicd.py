"""Approximate (frozen-weight) coordinate descent baseline.

Each update replaces the coordinate problem by a weighted absolute
deviation problem whose weights are evaluated at the previous iterate,
then takes its weighted median. Paths use the same loop as the exact
solver so the vanilla / warm / warm-nudge variants line up.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import _kernels as K
from .core import Dataset, PathConfig, validate_tau
from .path import FitState, SolutionPath, _path


@dataclass(frozen=True)
class WeightedSample:
    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64).ravel()
        weights = np.asarray(self.weights, dtype=np.float64).ravel()
        if values.shape != weights.shape:
            raise ValueError("values and weights must have the same length")
        if np.any(weights < 0):
            raise ValueError("weights must be nonnegative")
        if not weights.sum() > 0:
            raise ValueError("total weight must be positive")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "weights", weights)


def weighted_median(sample: WeightedSample) -> float:
    """Smallest value whose cumulative weight reaches half the total.

    This minimizes ``sum(w * |v - m|)`` over ``m``.
    """
    if not isinstance(sample, WeightedSample):
        sample = WeightedSample(*sample)
    return float(K.weighted_median(sample.values, sample.weights, sample.values.size))


def qicd_update(state: FitState, dataset: Dataset, tau: float, lam: float, j: int) -> float:
    """Frozen-weight update of coordinate ``j`` (not applied to ``state``).

    The pseudo-sample holds the scaled partial residuals with weights
    ``|x_ij (tau - 1{x_ij u_ij < 0})| / n``, where ``u_ij`` is measured from
    the current ``beta_j``, plus the point 0 with weight ``lam``. So ``lam``
    here penalizes the 1/n averaged loss; ``lam * n`` is the matching
    penalty on the summed loss.
    """
    tau = validate_tau(tau)
    n = dataset.n
    buf = [np.empty(n + 1) for _ in range(3)]
    return float(K.qicd_update(dataset.x, state.resid, state.beta, j, tau, float(lam), *buf))


def qicd_solve_path(dataset: Dataset, tau: float, config: Optional[PathConfig] = None,
                    stop: Optional[Callable[[int, np.ndarray], bool]] = None) -> SolutionPath:
    """l1 path built with the frozen-weight update.

    Grid values are on the summed-loss scale used by the exact solver and
    are divided by n before entering the update, so both solvers target
    the same objective at each shared grid value.
    """
    config = PathConfig() if config is None else config
    return _path(dataset, validate_tau(tau), "l1", config, True, stop)
