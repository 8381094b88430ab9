import numpy as np
import pytest

from qcd.coord import build_profile, coord_min_l1
from qcd.core import Dataset, PathConfig, PenaltySpec, objective
from qcd.path import (FitState, cd_sweep, lambda_grid, lambda_max, nudge, solve_path,
                      solve_single)
from qcd.sim import SimSpec, generate_dataset


def small(rng, n=20, p=5):
    return Dataset(rng.normal(size=(n, p)), rng.normal(size=n))


def test_lambda_max_by_hand(rng):
    data, tau = small(rng, 5, 3), 0.3
    expected = 0.0
    for j in range(3):
        xj = data.x[:, j]
        v = data.y / xj
        g = -np.sum(np.where(xj > 0, xj * tau, -xj * (1 - tau))) + np.sum(np.abs(xj)[v < 0])
        expected = max(expected, abs(g))
    assert lambda_max(data, tau) == pytest.approx(expected, rel=1e-13)


def test_solution_zero_at_and_above_lambda_max(rng):
    data, tau = small(rng), 0.4
    top = lambda_max(data, tau)
    for lam in (top, top * 1.001):
        beta, info = solve_single(data, tau, PenaltySpec.l1(lam))
        assert np.all(beta == 0.0)
        assert info["max_change"] == 0.0
    below, _ = solve_single(data, tau, PenaltySpec.l1(top * 0.9))
    assert np.any(below != 0.0)


def test_lambda_grid_shape(rng):
    data = small(rng, 30, 5)
    g = lambda_grid(data, 0.3, 10)
    assert g.size == 10 and g[0] == lambda_max(data, 0.3)
    assert g[-1] == pytest.approx(0.01 * g[0])
    wide = small(rng, 10, 20)
    assert lambda_grid(wide, 0.3, 5)[-1] == pytest.approx(0.05 * lambda_max(wide, 0.3))
    assert lambda_grid(data, 0.3, 1).tolist() == [g[0]]


def test_orthogonal_design_one_sweep_decouples():
    x = np.zeros((6, 3))
    x[0:2, 0], x[2:4, 1], x[4:6, 2] = [1.0, 2.0], [1.5, -1.0], [0.5, 3.0]
    data = Dataset(x, np.array([2.0, 1.0, -1.0, 4.0, 0.3, 2.0]))
    tau, pen = 0.3, PenaltySpec.l1(0.2)
    state = FitState.start(data)
    cd_sweep(state, data, tau, pen)
    for j in range(3):
        alone = coord_min_l1(build_profile(data, np.zeros(3), j, tau, pen), pen.lam)
        assert state.beta[j] == alone


def test_sweep_never_increases_objective(rng):
    data, tau = small(rng, 20, 5), 0.3
    pen = PenaltySpec.l1(0.5)
    state = FitState.start(data, rng.normal(size=5))
    before = objective(data, state.beta, tau, pen)
    for _ in range(5):
        cd_sweep(state, data, tau, pen)
        after = objective(data, state.beta, tau, pen)
        assert after <= before + 1e-12
        before = after
    assert state.residual_error(data) < 1e-12


@pytest.mark.parametrize("kind", ["scad", "mcp"])
def test_nonconvex_sweep_descends(rng, kind):
    data, tau = small(rng, 25, 6), 0.5
    pen = PenaltySpec(kind, 0.8, 3.0)
    state = FitState.start(data, rng.normal(size=6))
    before = objective(data, state.beta, tau, pen)
    cd_sweep(state, data, tau, pen)
    assert objective(data, state.beta, tau, pen) <= before + 1e-12


def test_optimal_start_converges_in_one_sweep(rng):
    data, tau, pen = small(rng), 0.3, PenaltySpec.l1(1.0)
    beta, info = solve_single(data, tau, pen)
    assert info["converged"]
    again, info2 = solve_single(data, tau, pen, init=beta)
    assert info2["sweeps"] == 1 and info2["max_change"] < 1e-7
    np.testing.assert_array_equal(again, beta)


def test_single_column_unpenalized_is_weighted_quantile(rng):
    x = rng.normal(size=(25, 1))
    y = rng.normal(size=25)
    tau = 0.3
    beta, _ = solve_single(Dataset(x, y), tau, PenaltySpec.l1(0.0))
    # independent weighted quantile over signed points (sign flips tau)
    v, w, pos = y / x[:, 0], np.abs(x[:, 0]), x[:, 0] > 0
    cand = np.sort(v)
    loss = [np.sum(w * np.where(v - c >= 0,
                   np.where(pos, tau, 1 - tau), np.where(pos, 1 - tau, tau)) * np.abs(v - c))
            for c in cand]
    assert beta[0] == cand[int(np.argmin(loss))]


def test_solve_single_beats_random_probes(rng):
    data, tau = small(rng, 50, 10), 0.3
    grid = lambda_grid(data, tau, 20)
    pen = PenaltySpec.l1(grid[10])
    beta, _ = solve_single(data, tau, pen)
    best = objective(data, beta, tau, pen)
    assert best <= objective(data, np.zeros(10), tau, pen)
    for _ in range(200):
        assert best <= objective(data, rng.normal(0, 0.5, 10), tau, pen)


def test_nudge_examples():
    beta = np.array([1.0, -2.0])
    np.testing.assert_array_equal(nudge(beta, 0.0, np.random.default_rng(1)), beta)
    a = nudge(beta, 0.1, np.random.default_rng(7))
    b = nudge(beta, 0.1, np.random.default_rng(7))
    np.testing.assert_array_equal(a, b)


def test_nudge_moments():
    rng = np.random.default_rng(11)
    draws = np.array([nudge(np.array([0.5]), 0.1, rng)[0] for _ in range(100_000)])
    assert abs(draws.mean() - 0.5) < 3 * 0.1 / np.sqrt(1e5)
    assert abs(draws.std() - 0.1) < 0.005


def test_path_single_lambda_max_is_zero(rng):
    data = small(rng)
    path = solve_path(data, 0.3, "l1", PathConfig(grid=[lambda_max(data, 0.3)]))
    assert len(path) == 1 and np.all(path.betas[0] == 0.0)


def test_duplicate_lambda_gives_identical_solutions(rng):
    data = small(rng, 30, 6)
    g = lambda_grid(data, 0.3, 6)
    grid = np.repeat(g, 2)
    path = solve_path(data, 0.3, "l1", PathConfig(grid=grid, nudge_sigma=0.0))
    for k in range(0, 12, 2):
        np.testing.assert_array_equal(path.betas[k], path.betas[k + 1])


def test_path_stores_unnudged_solutions(rng):
    data = small(rng, 30, 6)
    path = solve_path(data, 0.3, "l1", PathConfig(grid_len=8, nudge_sigma=0.5, seed=3))
    for lam, beta, diag in zip(path.lambdas, path.betas, path.diagnostics):
        pen = PenaltySpec.l1(lam)
        assert diag["objective"] == objective(data, beta, 0.3, pen)
        if diag["converged"]:
            again, _ = solve_single(data, 0.3, pen, init=beta)
            np.testing.assert_allclose(again, beta, atol=1e-7)


def test_path_is_deterministic_per_seed(rng):
    data = small(rng, 30, 6)
    cfg = PathConfig(grid_len=10, seed=5)
    a, b = solve_path(data, 0.3, "l1", cfg), solve_path(data, 0.3, "l1", cfg)
    np.testing.assert_array_equal(a.betas, b.betas)


def test_vanilla_path_matches_independent_solves(rng):
    data = small(rng, 30, 6)
    cfg = PathConfig(grid_len=6, warm_start=False)
    path = solve_path(data, 0.3, "l1", cfg)
    for lam, beta in zip(path.lambdas, path.betas):
        ref, _ = solve_single(data, 0.3, PenaltySpec.l1(lam))
        np.testing.assert_array_equal(beta, ref)


def test_stop_callback_truncates(rng):
    data = small(rng, 30, 6)
    path = solve_path(data, 0.3, "l1", PathConfig(grid_len=10), stop=lambda k, b: k == 3)
    assert len(path) == 4 and path.grid.size == 10


@pytest.mark.parametrize("kind", ["scad", "mcp"])
def test_nonconvex_path_runs(kind):
    # the l1 lambda_max need not zero out a nonconvex fit: a coordinate
    # can jump to a distant minimum where the penalty is flat
    data, truth = generate_dataset(SimSpec(p=30, n=100, seed=2))
    path = solve_path(data, 0.3, kind, PathConfig(grid_len=15, seed=1))
    assert len(path) == 15 and np.all(np.isfinite(path.betas))
    assert np.count_nonzero(path.betas[0]) <= np.count_nonzero(path.betas[-1])


def test_screen_does_not_change_solutions():
    data, _ = generate_dataset(SimSpec(p=60, n=40, seed=4))
    on = solve_path(data, 0.3, "l1", PathConfig(grid_len=15, seed=2, screen=True))
    off = solve_path(data, 0.3, "l1", PathConfig(grid_len=15, seed=2, screen=False))
    np.testing.assert_array_equal(on.betas, off.betas)
    assert on.screened_fraction > 0 and off.screened_fraction == 0


def test_screen_off_still_zero_at_lambda_max():
    # at lambda_max the slope just beside 0 is 0 up to rounding; the walk
    # alone could settle on a neighbouring breakpoint of equal objective
    data, _ = generate_dataset(SimSpec(p=300, n=100, seed=3))
    cfg = dict(grid=lambda_grid(data, 0.3), nudge_sigma=0.0)
    on = solve_path(data, 0.3, "l1", PathConfig(screen=True, **cfg))
    off = solve_path(data, 0.3, "l1", PathConfig(screen=False, **cfg))
    assert not np.any(off.betas[0])
    np.testing.assert_array_equal(on.betas, off.betas)
