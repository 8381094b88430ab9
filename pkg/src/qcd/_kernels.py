"""Compiled inner loops.

Every array passed in is float64. ``X`` is expected column-major.
Penalty kinds are integer coded: see ``KIND``.
"""

import numpy as np
from numba import njit

L1, MCP, SCAD = 0, 1, 2
KIND = {"l1": L1, "mcp": MCP, "scad": SCAD}


@njit(cache=True)
def base_slope(xcol, tau):
    s = 0.0
    for i in range(xcol.shape[0]):
        xi = xcol[i]
        if xi > 0.0:
            s -= xi * tau
        elif xi < 0.0:
            s -= -xi * (1.0 - tau)
    return s


@njit(cache=True)
def kkt_threshold(v, w, m, s0):
    """Smallest l1 penalty at which 0 minimizes the coordinate problem.

    With ``g`` the loss derivative just left of 0 and ``t`` the weight of
    breakpoints sitting exactly at 0, zero is optimal iff ``g <= lam`` and
    ``g + t >= -lam``. Without such ties this is ``abs(g)``.
    """
    g = s0
    t = 0.0
    for i in range(m):
        if v[i] < 0.0:
            g += w[i]
        elif v[i] == 0.0:
            t += w[i]
    return max(0.0, g, -(g + t))


@njit(cache=True)
def l1_argmin(v, w, m, s0, lam, zero_bp):
    """Zero crossing of the running derivative over sorted ``v[:m]``.

    Equal breakpoints are absorbed together before the sign test, so a
    flat segment resolves to its left endpoint, unless it ends at the zero
    breakpoint: then 0 is returned, which keeps the result in line with
    the zero check.
    """
    d = s0 - lam
    pending = zero_bp
    i = 0
    while True:
        if pending and (i >= m or v[i] >= 0.0):
            b = 0.0
            d += 2.0 * lam
            pending = False
            while i < m and v[i] == 0.0:
                d += w[i]
                i += 1
        elif i < m:
            b = v[i]
            while i < m and v[i] == b:
                d += w[i]
                i += 1
        else:
            return 0.0
        if d >= 0.0:
            if d == 0.0 and pending and (i >= m or v[i] >= 0.0):
                return 0.0
            return b


@njit(cache=True)
def boost(b, lam, a, kind, right):
    """Penalty contribution to the derivative at ``b``.

    Continuous except at 0, where ``right`` picks the one-sided value.
    """
    if b == 0.0:
        return lam if right else -lam
    if kind == L1:
        return lam if b > 0.0 else -lam
    if kind == MCP:
        if b < 0.0:
            if b >= -a * lam:
                return -lam - b / a
            return 0.0
        if b < a * lam:
            return lam - b / a
        return 0.0
    if b < 0.0:
        if b < -a * lam:
            return 0.0
        if b <= -lam:
            return (-a * lam - b) / (a - 1.0)
        return -lam
    if b < lam:
        return lam
    if b <= a * lam:
        return (a * lam - b) / (a - 1.0)
    return 0.0


@njit(cache=True)
def penalty(b, lam, a, kind):
    ab = abs(b)
    if kind == L1:
        return lam * ab
    if kind == MCP:
        if ab < a * lam:
            return lam * ab - ab * ab / (2.0 * a)
        return a * lam * lam / 2.0
    if ab < lam:
        return lam * ab
    if ab <= a * lam:
        return (a * lam * ab - (ab * ab + lam * lam) / 2.0) / (a - 1.0)
    return (a + 1.0) * lam * lam / 2.0


@njit(cache=True)
def coord_objective(v, xs, m, tau, b, lam, a, kind):
    s = 0.0
    for i in range(m):
        u = v[i] - b
        t = tau if xs[i] > 0.0 else 1.0 - tau
        if u >= 0.0:
            s += abs(xs[i]) * u * t
        else:
            s += abs(xs[i]) * u * (t - 1.0)
    return s + penalty(b, lam, a, kind)


@njit(cache=True)
def nonconvex_argmin(v, xs, m, tau, s0, lam, a, kind, first_crossing):
    """Exact coordinate minimizer for MCP/SCAD over sorted ``v[:m]``.

    Walks the merged data and penalty breakpoints tracking the one-sided
    derivatives. With ``first_crossing`` the first breakpoint where the
    segment-start derivative turns nonnegative is returned. Otherwise
    every breakpoint with a negative left and nonnegative right
    derivative is a local minimum and the lowest one wins. A flat stretch
    ending at 0 resolves to 0, as in the l1 walk.
    """
    if m == 0:
        return 0.0
    if kind == MCP:
        pb = np.array([-a * lam, 0.0, a * lam])
    else:
        pb = np.array([-a * lam, -lam, 0.0, lam, a * lam])
    npb = pb.shape[0]
    i = 0
    k = 0
    d = s0
    prev = s0
    best_b = 0.0
    best_f = np.inf
    while i < m or k < npb:
        if k < npb and (i >= m or pb[k] <= v[i]):
            b = pb[k]
        else:
            b = v[i]
        left = d + boost(b, lam, a, kind, False)
        while k < npb and pb[k] == b:
            k += 1
        while i < m and v[i] == b:
            d += abs(xs[i])
            i += 1
        right = d + boost(b, lam, a, kind, True)
        if first_crossing:
            if prev < 0.0 and right >= 0.0:
                return b
            prev = right
        elif left < 0.0 and right >= 0.0:
            if right == 0.0 and b < 0.0 and boost(b, lam, a, kind, True) == boost(0.0, lam, a, kind, False):
                # flat up to the next breakpoint; if that is 0, take 0
                nxt = np.inf
                if k < npb:
                    nxt = pb[k]
                if i < m and v[i] < nxt:
                    nxt = v[i]
                if nxt == 0.0:
                    b = 0.0
            f = coord_objective(v, xs, m, tau, b, lam, a, kind)
            if f < best_f:
                best_f = f
                best_b = b
    return best_b


@njit(cache=True)
def weighted_median(vals, wts, m):
    """Smallest value whose cumulative weight reaches half the total."""
    total = 0.0
    for i in range(m):
        total += wts[i]
    order = np.argsort(vals[:m])
    half = total / 2.0
    c = 0.0
    for t in range(m):
        c += wts[order[t]]
        if c >= half:
            return vals[order[t]]
    return vals[order[m - 1]]


@njit(cache=True)
def _gather(X, r, beta, j, vbuf, xbuf):
    n = X.shape[0]
    bj = beta[j]
    m = 0
    for i in range(n):
        xi = X[i, j]
        if xi != 0.0:
            vbuf[m] = (r[i] + xi * bj) / xi
            xbuf[m] = xi
            m += 1
    return m


@njit(cache=True)
def exact_update(X, r, beta, j, tau, lam, a, kind, screen, s0, vbuf, xbuf, wbuf):
    """New value of ``beta[j]`` and whether the zero check short-circuited."""
    m = _gather(X, r, beta, j, vbuf, xbuf)
    if m == 0:
        if lam > 0.0:
            return 0.0, False
        return beta[j], False
    for i in range(m):
        wbuf[i] = abs(xbuf[i])
    # the threshold alone decides whether 0 is optimal, so a disabled
    # screen changes the cost (the sort below) and never the result
    zero = kind == L1 and lam > 0.0 and kkt_threshold(vbuf, wbuf, m, s0) <= lam
    if zero and screen:
        return 0.0, True
    order = np.argsort(vbuf[:m])
    vs = vbuf[:m][order]
    xs = xbuf[:m][order]
    if kind == L1:
        if zero:
            return 0.0, False
        return l1_argmin(vs, np.abs(xs), m, s0, lam, True), False
    return nonconvex_argmin(vs, xs, m, tau, s0, lam, a, kind, False), False


@njit(cache=True)
def qicd_update(X, r, beta, j, tau, lam_avg, vbuf, xbuf, wbuf):
    """Weighted median of the pseudo-sample with weights frozen at ``beta[j]``.

    ``lam_avg`` is the pseudo-point weight on the 1/n averaged loss scale.
    """
    n = X.shape[0]
    bj = beta[j]
    m = _gather(X, r, beta, j, vbuf, xbuf)
    for i in range(m):
        u = vbuf[i] - bj
        ind = 1.0 if xbuf[i] * u < 0.0 else 0.0
        wbuf[i] = abs(xbuf[i] * (tau - ind)) / n
    vbuf[m] = 0.0
    wbuf[m] = lam_avg
    total = 0.0
    for i in range(m + 1):
        total += wbuf[i]
    if total <= 0.0:
        return 0.0
    return weighted_median(vbuf, wbuf, m + 1)


@njit(cache=True)
def solve(X, r, beta, tau, lam, a, kind, screen, s0s, tol, max_sweeps, approx):
    """Cyclic sweeps until the largest change drops below ``tol``.

    ``r`` holds ``y - X @ beta`` and is updated in place together with
    ``beta``. ``approx`` switches to the frozen-weight weighted median;
    there ``lam`` is on the averaged-loss scale.
    Returns (sweeps, converged, screened visits, total visits, last change).
    """
    n, p = X.shape
    vbuf = np.empty(n + 1)
    xbuf = np.empty(n + 1)
    wbuf = np.empty(n + 1)
    sweeps = 0
    screened = 0
    visits = 0
    converged = False
    change = 0.0
    while sweeps < max_sweeps:
        change = 0.0
        for j in range(p):
            bj = beta[j]
            if approx:
                new = qicd_update(X, r, beta, j, tau, lam, vbuf, xbuf, wbuf)
            else:
                new, hit = exact_update(X, r, beta, j, tau, lam, a, kind, screen,
                                        s0s[j], vbuf, xbuf, wbuf)
                if hit:
                    screened += 1
            visits += 1
            delta = new - bj
            if delta != 0.0:
                for i in range(n):
                    r[i] -= X[i, j] * delta
                beta[j] = new
                if abs(delta) > change:
                    change = abs(delta)
        sweeps += 1
        if change < tol:
            converged = True
            break
    return sweeps, converged, screened, visits, change
