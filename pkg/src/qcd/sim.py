"""Simulation design, accuracy metrics and the RMSE stopping rule."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import ndtr, ndtri
from scipy.stats import rankdata

from .core import Dataset, validate_tau

SUPPORT = (0, 5, 11, 14, 19)  # predictors 1, 6, 12, 15, 20
STOP_FRACTION = 0.3


@dataclass(frozen=True)
class SimSpec:
    p: int
    n: int
    tau: float = 0.3
    seed: int = 0
    rho: float = 0.5

    def __post_init__(self):
        if self.p < 20:
            raise ValueError(f"p must be >= 20 to hold the support {{1, 6, 12, 15, 20}}, got {self.p}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        validate_tau(self.tau)
        if not -1.0 < self.rho < 1.0:
            raise ValueError("rho must lie in (-1, 1)")


@dataclass(frozen=True)
class GroundTruth:
    beta_true: np.ndarray
    support: tuple = SUPPORT


def true_coefficients(p: int, tau: float) -> np.ndarray:
    beta = np.zeros(p)
    beta[0] = 0.7 * ndtri(tau)
    beta[[5, 11, 14, 19]] = 1.0
    return beta


def ar1_normal(n: int, p: int, rho: float, rng: np.random.Generator) -> np.ndarray:
    """Rows drawn from N(0, S) with ``S[i, k] = rho ** |i - k|``."""
    z = rng.standard_normal((n, p))
    out = np.empty((n, p), order="F")
    out[:, 0] = z[:, 0]
    scale = np.sqrt(1.0 - rho * rho)
    for k in range(1, p):
        out[:, k] = rho * out[:, k - 1] + scale * z[:, k]
    return out


def generate_dataset(spec: SimSpec):
    """Heteroscedastic design with five relevant predictors.

    The first predictor is mapped through the normal CDF and scales the
    noise, so its quantile coefficient is ``0.7 * ndtri(tau)``; predictors
    6, 12, 15 and 20 have coefficient 1.
    Returns ``(Dataset, GroundTruth)``.
    """
    rng = np.random.default_rng(spec.seed)
    x = ar1_normal(spec.n, spec.p, spec.rho, rng)
    x[:, 0] = ndtr(x[:, 0])
    eps = rng.standard_normal(spec.n)
    y = x[:, 5] + x[:, 11] + x[:, 14] + x[:, 19] + 0.7 * x[:, 0] * eps
    return Dataset(x, y), GroundTruth(true_coefficients(spec.p, spec.tau))


def rmse(beta_hat, beta_true) -> float:
    """Relative squared error ``sum((b - b0)**2) / sum(b0**2)`` (no square root)."""
    beta_hat = np.asarray(beta_hat, dtype=np.float64)
    beta_true = np.asarray(beta_true, dtype=np.float64)
    denom = float(np.sum(beta_true ** 2))
    if denom == 0.0:
        raise ValueError("beta_true is identically zero")
    return float(np.sum((beta_hat - beta_true) ** 2)) / denom


def auroc(beta_hat, support) -> float:
    """Area under the ROC curve for recovering ``support`` from ``|beta_hat|``.

    Rank-sum form: the chance a support coordinate outscores a null one,
    ties counting one half.
    """
    scores = np.abs(np.asarray(beta_hat, dtype=np.float64))
    labels = np.zeros(scores.size, dtype=bool)
    labels[list(support)] = True
    n_pos = int(labels.sum())
    n_neg = scores.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("support must be neither empty nor the full index set")
    ranks = rankdata(scores)
    u = ranks[labels].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def _violates(curve, k: int, running_min: float) -> bool:
    drop = curve[0] - running_min
    return curve[k] - running_min > STOP_FRACTION * drop


def stopping_rule(rmse_curve) -> Optional[int]:
    """First index where RMSE has rebounded past 30% of its total drop.

    The first entry is the RMSE at the largest penalty. Scanning starts at
    index 2, once at least one candidate minimum has been seen.
    Returns None when the rule never fires.
    """
    curve = np.asarray(rmse_curve, dtype=np.float64)
    if curve.size < 2:
        raise ValueError("need at least two RMSE values")
    running = min(curve[0], curve[1])
    for k in range(2, curve.size):
        running = min(running, curve[k])
        if _violates(curve, k, running):
            return k
    return None


class OnlineStop:
    """Stopping callback for ``solve_path``: tracks RMSE as solutions arrive."""

    def __init__(self, beta_true, enabled: bool = True):
        self.beta_true = np.asarray(beta_true)
        self.enabled = enabled
        self.curve = []
        self.index = None

    def __call__(self, k: int, beta) -> bool:
        self.curve.append(rmse(beta, self.beta_true))
        if not self.enabled or len(self.curve) < 3:
            return False
        if stopping_rule(self.curve) == len(self.curve) - 1:
            self.index = len(self.curve) - 1
            return True
        return False
