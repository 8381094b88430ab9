"""Exact coordinatewise minimization of the penalized check loss.

With every other coefficient held fixed, the objective in ``beta_j`` is
piecewise linear (l1) or piecewise quadratic (SCAD, MCP) in the scaled
partial residuals. Its derivative is tracked segment by segment over the
sorted breakpoints and the minimizer sits where it turns nonnegative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .core import Dataset, PenaltySpec, validate_tau


@dataclass(frozen=True)
class BreakpointProfile:
    """Sorted breakpoints of one coordinate problem.

    ``v`` holds the scaled partial residuals followed by the penalty
    breakpoints, sorted ascending. ``x`` is the signed predictor value for
    each data breakpoint and 0 for a penalty breakpoint, so the weight of
    a breakpoint is ``abs(x)``. ``base_slope`` is the loss derivative left
    of every breakpoint.
    """

    v: np.ndarray
    x: np.ndarray
    tau: float
    base_slope: float

    @property
    def w(self) -> np.ndarray:
        return np.abs(self.x)

    @property
    def data(self):
        """Data breakpoints only, as sorted ``(v, x)`` arrays."""
        keep = self.x != 0.0
        return self.v[keep], self.x[keep]

    @property
    def has_zero(self) -> bool:
        return bool(np.any((self.x == 0.0) & (self.v == 0.0)))

    def objective(self, b, penalty: PenaltySpec) -> float:
        """Coordinate objective at ``b`` (constant terms dropped)."""
        v, x = self.data
        return float(K.coord_objective(v, x, v.size, self.tau, float(b), penalty.lam,
                                       _shape(penalty), K.KIND[penalty.kind]))


def _shape(penalty: PenaltySpec) -> float:
    return 0.0 if penalty.a is None else penalty.a


def penalty_breakpoints(penalty: PenaltySpec) -> np.ndarray:
    lam = penalty.lam
    if penalty.kind == "l1":
        return np.array([0.0])
    if penalty.kind == "mcp":
        return np.array([-penalty.a * lam, 0.0, penalty.a * lam])
    return np.array([-penalty.a * lam, -lam, 0.0, lam, penalty.a * lam])


def scaled_partial_residuals(dataset: Dataset, beta, j: int):
    """Scaled partial residuals of coordinate ``j`` (0-based) and their weights.

    Observations with ``x[i, j] == 0`` do not involve ``beta_j`` and are
    omitted. Returns ``(v, w)`` in observation order.
    """
    beta = np.asarray(beta, dtype=np.float64)
    xj = dataset.x[:, j]
    others = dataset.x @ beta - xj * beta[j]
    keep = xj != 0.0
    v = (dataset.y[keep] - others[keep]) / xj[keep]
    return v, np.abs(xj[keep])


def base_slope(x_col, tau: float) -> float:
    """Derivative of the coordinate loss left of all breakpoints (<= 0)."""
    return float(K.base_slope(np.asarray(x_col, dtype=np.float64), float(tau)))


def make_profile(v, x, tau: float, penalty: PenaltySpec | None = None,
                 include_zero: bool = True) -> BreakpointProfile:
    """Build a profile from scaled residuals ``v`` and signed predictors ``x``.

    Entries with ``x == 0`` are dropped. Penalty breakpoints carry weight
    0: 0 for l1 (when ``include_zero``), 0 and ``±a*lam`` for MCP, 0,
    ``±lam`` and ``±a*lam`` for SCAD.
    """
    tau = validate_tau(tau)
    v = np.asarray(v, dtype=np.float64).ravel()
    x = np.asarray(x, dtype=np.float64).ravel()
    if v.shape != x.shape:
        raise ValueError("v and x must have the same length")
    s0 = base_slope(x, tau)
    keep = x != 0.0
    v, x = v[keep], x[keep]
    if penalty is not None and penalty.kind != "l1":
        extra = penalty_breakpoints(penalty)
    elif include_zero:
        extra = np.array([0.0])
    else:
        extra = np.empty(0)
    allv = np.concatenate([v, extra])
    allx = np.concatenate([x, np.zeros(extra.size)])
    order = np.argsort(allv, kind="stable")
    allv, allx = allv[order], allx[order]
    allv.setflags(write=False)
    allx.setflags(write=False)
    return BreakpointProfile(allv, allx, tau, s0)


def build_profile(dataset: Dataset, beta, j: int, tau: float,
                  penalty: PenaltySpec | None = None) -> BreakpointProfile:
    """Profile of coordinate ``j`` at the current ``beta``."""
    beta = np.asarray(beta, dtype=np.float64)
    xj = dataset.x[:, j]
    partial = dataset.y - dataset.x @ beta + xj * beta[j]
    with np.errstate(divide="ignore", invalid="ignore"):
        v = np.where(xj != 0.0, partial / np.where(xj != 0.0, xj, 1.0), 0.0)
    return make_profile(v, xj, tau, penalty)


def kkt_threshold(profile: BreakpointProfile) -> float:
    """Smallest l1 penalty at which the coordinate minimizer is exactly 0.

    Equals ``abs(base_slope + sum of weights with v < 0)`` unless some
    breakpoints sit exactly at 0, whose weight then widens the band.
    """
    v, x = profile.data
    return float(K.kkt_threshold(v, np.abs(x), v.size, profile.base_slope))


def kkt_zero_check(profile: BreakpointProfile, lam: float) -> bool:
    """True when the exact l1 coordinate minimizer is 0.

    Needs only one pass over the residual signs, no sorting.
    """
    return bool(kkt_threshold(profile) <= lam)


def coord_min_l1(profile: BreakpointProfile, lam: float) -> float:
    """Exact minimizer of the l1-penalized coordinate problem.

    The running derivative starts at ``base_slope - lam``, grows by each
    breakpoint weight and jumps by ``2 * lam`` at 0. The breakpoint where
    it first becomes nonnegative is returned; a flat stretch resolves to
    its left end. When the zero check passes the answer is 0, decided by
    that check alone. An empty profile gives 0.
    """
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    v, x = profile.data
    zero_bp = profile.has_zero
    if not zero_bp and lam != 0.0:
        raise ValueError("a penalized profile must contain the zero breakpoint")
    w = np.abs(x)
    if lam > 0.0 and K.kkt_threshold(v, w, v.size, profile.base_slope) <= lam:
        return 0.0
    return float(K.l1_argmin(v, w, v.size, profile.base_slope, float(lam), zero_bp))


def derivative_trace(profile: BreakpointProfile, lam: float) -> np.ndarray:
    """Derivative on each segment of the l1 problem, leftmost first.

    Entry 0 is the slope before the first breakpoint; entry k the slope
    after the k-th breakpoint of ``profile.v``.
    """
    out = [profile.base_slope - lam]
    for vk, xk in zip(profile.v, profile.x):
        d = out[-1] + abs(xk)
        if xk == 0.0 and vk == 0.0:
            d += 2.0 * lam
        out.append(d)
    return np.array(out)


def mcp_boost(beta: float, lam: float, a: float) -> float:
    """MCP contribution to the coordinate derivative at ``beta``."""
    return float(K.boost(float(beta), float(lam), float(a), K.MCP, True))


def scad_boost(beta: float, lam: float, a: float) -> float:
    """SCAD contribution to the coordinate derivative at ``beta``."""
    return float(K.boost(float(beta), float(lam), float(a), K.SCAD, True))


def coord_min_nonconvex(profile: BreakpointProfile, penalty: PenaltySpec,
                        first_crossing: bool = False) -> float:
    """Exact minimizer of the MCP- or SCAD-penalized coordinate problem.

    Inside ``(-a*lam, a*lam)`` the derivative decreases linearly between
    breakpoints, so a zero crossing there is a local maximum and every
    local minimum sits on a breakpoint with negative left and nonnegative
    right derivative. These are compared by objective value and the
    lowest is returned (leftmost on ties).

    ``first_crossing=True`` instead returns the first breakpoint where the
    derivative at segment starts turns nonnegative. That is a local
    minimum but not always the global one, e.g. when a large unpenalized
    optimum competes with the penalty's local minimum at 0.
    """
    if penalty.kind == "l1":
        return coord_min_l1(profile, penalty.lam)
    v, x = profile.data
    return float(K.nonconvex_argmin(v, x, v.size, profile.tau, profile.base_slope,
                                    penalty.lam, penalty.a, K.KIND[penalty.kind],
                                    first_crossing))


def coord_min(profile: BreakpointProfile, penalty: PenaltySpec) -> float:
    if penalty.kind == "l1":
        return coord_min_l1(profile, penalty.lam)
    return coord_min_nonconvex(profile, penalty)
