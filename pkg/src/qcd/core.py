"""Problem instances, the check loss and the penalty family."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

PENALTIES = ("l1", "scad", "mcp")
DEFAULT_A = 2.2


def validate_tau(tau: float) -> float:
    tau = float(tau)
    if not 0.0 < tau < 1.0:
        raise ValueError(f"tau must lie in the open interval (0, 1), got {tau}")
    return tau


@dataclass(frozen=True)
class Dataset:
    """Design matrix and response.

    ``x`` is stored column-major (Fortran order) since every solver scans
    one predictor column at a time. Both arrays are made read-only.
    """

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asfortranarray(np.asarray(self.x, dtype=np.float64))
        y = np.ascontiguousarray(np.asarray(self.y, dtype=np.float64))
        if x.ndim != 2:
            raise ValueError(f"x must be 2-dimensional, got shape {x.shape}")
        if y.ndim != 1:
            raise ValueError(f"y must be 1-dimensional, got shape {y.shape}")
        n, p = x.shape
        if n < 1 or p < 1:
            raise ValueError(f"need n >= 1 and p >= 1, got n={n}, p={p}")
        if y.shape[0] != n:
            raise ValueError(f"x has {n} rows but y has length {y.shape[0]}")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ValueError("x and y must contain only finite values")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def p(self) -> int:
        return self.x.shape[1]


@dataclass(frozen=True)
class PenaltySpec:
    """Penalty kind, strength ``lam`` and (SCAD/MCP only) shape ``a``."""

    kind: str
    lam: float
    a: Optional[float] = None

    def __post_init__(self):
        kind = self.kind.lower()
        if kind not in PENALTIES:
            raise ValueError(f"unknown penalty {self.kind!r}; expected one of {PENALTIES}")
        lam = float(self.lam)
        if not lam >= 0.0:
            raise ValueError(f"lambda must be >= 0, got {self.lam}")
        a = self.a
        if kind == "l1":
            if a is not None:
                raise ValueError("the l1 penalty takes no shape parameter")
        else:
            a = DEFAULT_A if a is None else float(a)
            if kind == "mcp" and not a > 1.0:
                raise ValueError(f"MCP requires a > 1, got {a}")
            if kind == "scad" and not a > 2.0:
                raise ValueError(f"SCAD requires a > 2, got {a}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "a", a)

    @classmethod
    def l1(cls, lam: float) -> "PenaltySpec":
        return cls("l1", lam)

    @classmethod
    def mcp(cls, lam: float, a: float = DEFAULT_A) -> "PenaltySpec":
        return cls("mcp", lam, a)

    @classmethod
    def scad(cls, lam: float, a: float = DEFAULT_A) -> "PenaltySpec":
        return cls("scad", lam, a)

    def with_lambda(self, lam: float) -> "PenaltySpec":
        return PenaltySpec(self.kind, lam, self.a)


@dataclass
class PathConfig:
    """Settings for a regularization path solve.

    Parameters
    ----------
    grid : non-increasing penalty values; ``None`` builds the default grid
        from ``grid_len`` and ``min_ratio``.
    nudge_sigma : standard deviation of the Gaussian perturbation added to
        each warm start. 0 disables it.
    warm_start : start each lambda from the previous solution. When off,
        every lambda starts from zero and no nudge is applied.
    tol : stop sweeping once the largest coefficient change is below this.
    max_sweeps : hard cap on sweeps per lambda.
    seed : seed of the nudge stream.
    single_sweep : perform exactly one sweep per lambda.
    screen : use the exact zero check (l1 only) to skip sorting.
    a : shape parameter used when the path penalty is SCAD or MCP.
    """

    grid: Optional[Sequence[float]] = None
    nudge_sigma: float = 0.1
    warm_start: bool = True
    tol: float = 1e-7
    max_sweeps: int = 500
    seed: int = 0
    single_sweep: bool = False
    screen: bool = True
    grid_len: int = 100
    min_ratio: Optional[float] = None
    a: float = DEFAULT_A

    def __post_init__(self):
        if self.grid is not None:
            grid = np.asarray(self.grid, dtype=np.float64)
            if grid.ndim != 1 or grid.size < 1:
                raise ValueError("grid must be a non-empty 1-d sequence")
            if np.any(grid < 0) or not np.all(np.isfinite(grid)):
                raise ValueError("grid values must be finite and >= 0")
            if np.any(np.diff(grid) > 0):
                raise ValueError("grid must be non-increasing")
            self.grid = grid
        if not self.tol > 0:
            raise ValueError("tol must be > 0")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be >= 1")
        if self.nudge_sigma < 0:
            raise ValueError("nudge_sigma must be >= 0")


def check_loss(u, tau: float):
    """Check (pinball) loss ``u * (tau - 1{u < 0})``, elementwise."""
    u = np.asarray(u, dtype=np.float64)
    out = np.where(u < 0, u * (tau - 1.0), u * tau)
    return out if out.ndim else float(out)


def penalty_value(beta, penalty: PenaltySpec):
    """Penalty of each coefficient (elementwise, same shape as ``beta``)."""
    b = np.abs(np.asarray(beta, dtype=np.float64))
    lam, a = penalty.lam, penalty.a
    if penalty.kind == "l1":
        out = lam * b
    elif penalty.kind == "mcp":
        out = np.where(b < a * lam, lam * b - b * b / (2.0 * a), a * lam * lam / 2.0)
    else:
        mid = (a * lam * b - (b * b + lam * lam) / 2.0) / (a - 1.0)
        out = np.where(b < lam, lam * b, np.where(b <= a * lam, mid, (a + 1.0) * lam * lam / 2.0))
    return out if out.ndim else float(out)


def objective(dataset: Dataset, beta, tau: float, penalty: PenaltySpec) -> float:
    """Total check loss of the residuals plus the summed penalty."""
    beta = np.asarray(beta, dtype=np.float64)
    if beta.shape != (dataset.p,):
        raise ValueError(f"beta has shape {beta.shape}, expected ({dataset.p},)")
    resid = dataset.y - dataset.x @ beta
    return float(np.sum(check_loss(resid, tau)) + np.sum(penalty_value(beta, penalty)))
