"""Brute-force reference minimizers used to check the exact updates.

Plain numpy, sharing nothing with the compiled kernels.
"""

import numpy as np

from .core import PenaltySpec, check_loss, penalty_value


def coordinate_objective(v, x, tau, b, penalty: PenaltySpec):
    """Coordinate objective evaluated at each value of ``b``.

    Points with ``x > 0`` use the tau check loss and points with ``x < 0``
    the (1 - tau) check loss, each weighted by ``abs(x)``.
    """
    v = np.asarray(v, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    b = np.atleast_1d(np.asarray(b, dtype=np.float64))
    diff = v[None, :] - b[:, None]
    pos = x > 0
    neg = x < 0
    loss = (check_loss(diff[:, pos], tau) @ np.abs(x[pos])
            + check_loss(diff[:, neg], 1.0 - tau) @ np.abs(x[neg]))
    return loss + penalty_value(b, penalty)


def _data(profile):
    keep = profile.x != 0.0
    return profile.v[keep], profile.x[keep]


def oracle_coord_min(profile, penalty: PenaltySpec, step: float = 1e-4,
                     chunk: int = 20000):
    """Reference minimizer of one coordinate problem.

    l1: the objective is convex piecewise linear, so the minimum is
    attained at a breakpoint; every breakpoint (and 0) is evaluated and
    the leftmost minimizer returned. SCAD/MCP: all breakpoints plus a
    grid of spacing ``step`` over ``[min - 1, max + 1]`` are evaluated.

    Returns ``(argmin, minimum)``.
    """
    v, x = _data(profile)
    cands = np.unique(np.concatenate([profile.v, [0.0]]))
    if penalty.kind != "l1":
        lo, hi = cands.min() - 1.0, cands.max() + 1.0
        grid = np.arange(lo, hi + step, step)
        cands = np.unique(np.concatenate([cands, grid]))
    best_b, best_f = 0.0, np.inf
    for start in range(0, cands.size, chunk):
        part = cands[start:start + chunk]
        vals = coordinate_objective(v, x, profile.tau, part, penalty)
        k = int(np.argmin(vals))
        if vals[k] < best_f:
            best_f, best_b = float(vals[k]), float(part[k])
    return best_b, best_f
