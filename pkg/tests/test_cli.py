import csv
import json

import numpy as np
import pytest

from qcd.cli import int_list, main
from qcd.core import PathConfig, PenaltySpec, objective
from qcd.formats import read_beta, read_dataset, read_path
from qcd.path import lambda_grid, solve_path


def rows(path):
    with open(path) as fh:
        return list(csv.reader(fh))


@pytest.fixture
def data_dir(tmp_path):
    assert main(["simulate", "--p", "25", "--n", "40", "--seed", "2", "--out-dir", str(tmp_path)]) == 0
    return tmp_path


def test_simulate_files(tmp_path, monkeypatch):
    monkeypatch.delenv("QCD_SEED", raising=False)
    out = tmp_path / "a"
    assert main(["simulate", "--p", "20", "--n", "5", "--tau", "0.5", "--seed", "1", "--out-dir", str(out)]) == 0
    truth = rows(out / "truth.csv")
    assert truth[0] == ["j", "beta_true"] and truth[1] == ["1", "0.0"]
    x = rows(out / "X.csv")
    assert x[0] == [f"x{j}" for j in range(1, 21)] and len(x) == 6
    assert rows(out / "y.csv")[0] == ["y"]
    again = tmp_path / "b"
    main(["simulate", "--p", "20", "--n", "5", "--tau", "0.5", "--seed", "1", "--out-dir", str(again)])
    for name in ("X.csv", "y.csv", "truth.csv"):
        assert (out / name).read_bytes() == (again / name).read_bytes()


def test_simulate_rejects_small_p(tmp_path, capsys):
    assert main(["simulate", "--p", "19", "--out-dir", str(tmp_path)]) == 2
    assert "support" in capsys.readouterr().err


def test_env_seed_overrides(tmp_path, monkeypatch):
    monkeypatch.setenv("QCD_SEED", "7")
    main(["simulate", "--p", "20", "--n", "5", "--seed", "1", "--out-dir", str(tmp_path / "e")])
    monkeypatch.delenv("QCD_SEED")
    main(["simulate", "--p", "20", "--n", "5", "--seed", "7", "--out-dir", str(tmp_path / "s")])
    assert (tmp_path / "e" / "X.csv").read_bytes() == (tmp_path / "s" / "X.csv").read_bytes()


def test_usage_errors(tmp_path):
    assert main(["bench", "--bogus"]) == 2
    assert main(["fit", "--out-dir", str(tmp_path)]) == 2  # --lambda is required
    assert main([]) == 2


def test_parse_error_names_location(tmp_path, capsys):
    (tmp_path / "X.csv").write_text("x1,x2\n1.0,2.0\n3.0,oops\n")
    (tmp_path / "y.csv").write_text("y\n1.0\n2.0\n")
    assert main(["fit", "--lambda", "1", "--data-dir", str(tmp_path), "--out-dir", str(tmp_path)]) == 3
    err = capsys.readouterr().err
    assert "line 3" in err and "column 2" in err


def test_dimension_mismatch(tmp_path):
    (tmp_path / "X.csv").write_text("x1\n1.0\n3.0\n")
    (tmp_path / "y.csv").write_text("y\n1.0\n")
    assert main(["fit", "--lambda", "1", "--data-dir", str(tmp_path), "--out-dir", str(tmp_path)]) == 3


def test_fit_huge_lambda_is_zero(data_dir):
    assert main(["fit", "--lambda", "1e9", "--out-dir", str(data_dir)]) == 0
    beta = read_beta(data_dir / "beta.csv")
    assert beta.shape == (25,) and np.all(beta == 0.0)


def test_fit_prints_matching_objective(data_dir, capsys):
    assert main(["fit", "--lambda", "3", "--tau", "0.4", "--out-dir", str(data_dir)]) == 0
    printed = float(capsys.readouterr().out.strip())
    data, beta = read_dataset(data_dir), read_beta(data_dir / "beta.csv")
    resid = data.y - data.x @ beta
    direct = np.sum(np.maximum(0.4 * resid, (0.4 - 1) * resid)) + 3 * np.abs(beta).sum()
    assert printed == pytest.approx(direct, rel=1e-12)


def test_fit_single_column_is_weighted_quantile(tmp_path):
    x = np.array([1.0, 2.0, -1.0, 0.5, 1.5])
    y = np.array([2.0, 1.0, 3.0, 2.0, -1.0])
    (tmp_path / "X.csv").write_text("x1\n" + "\n".join(repr(float(v)) for v in x) + "\n")
    (tmp_path / "y.csv").write_text("y\n" + "\n".join(repr(float(v)) for v in y) + "\n")
    assert main(["fit", "--lambda", "0", "--tau", "0.5", "--out-dir", str(tmp_path)]) == 0
    b = read_beta(tmp_path / "beta.csv")[0]
    cost = lambda c: np.sum(0.5 * np.abs(y - x * c))
    assert cost(b) <= min(cost(c) for c in y / x) + 1e-12


def test_path_at_lambda_max_has_only_diagnostic_rows(data_dir):
    assert main(["path", "--grid-len", "1", "--out-dir", str(data_dir)]) == 0
    body = rows(data_dir / "path.csv")
    assert body[0] == ["lambda", "j", "beta"]
    assert len(body) == 2 and body[1][1] == "-1"


def test_path_deterministic_mode(data_dir, tmp_path):
    args = ["path", "--penalty", "l1", "--nudge", "0", "--single-sweep", "--grid-len", "20",
            "--data-dir", str(data_dir)]
    main(args + ["--out-dir", str(tmp_path / "r1")])
    main(args + ["--out-dir", str(tmp_path / "r2")])
    assert (tmp_path / "r1" / "path.csv").read_bytes() == (tmp_path / "r2" / "path.csv").read_bytes()


def test_path_round_trip(data_dir):
    assert main(["path", "--grid-len", "15", "--seed", "4", "--out-dir", str(data_dir)]) == 0
    data = read_dataset(data_dir)
    meta = json.loads((data_dir / "path_meta.json").read_text())
    path = solve_path(data, 0.3, "l1", PathConfig(grid=lambda_grid(data, 0.3, 15), seed=4))
    lambdas, betas, sweeps = read_path(data_dir / "path.csv", data.p)
    np.testing.assert_array_equal(lambdas, path.lambdas)
    np.testing.assert_array_equal(betas, path.betas)
    assert sweeps == [d["sweeps"] for d in path.diagnostics]
    assert meta["grid"] == path.grid.tolist() and len(meta["diagnostics"]) == 15


@pytest.mark.parametrize("penalty", ["scad", "mcp"])
def test_path_nonconvex(data_dir, penalty):
    assert main(["path", "--penalty", penalty, "--a", "3.0", "--grid-len", "5",
                 "--out-dir", str(data_dir)]) == 0
    assert json.loads((data_dir / "path_meta.json").read_text())["penalty"] == penalty


def test_bench_single_cell(tmp_path):
    assert main(["bench", "--dims", "20", "--seeds", "1", "--n", "30", "--grid-len", "10",
                 "--jobs", "1", "--out-dir", str(tmp_path)]) == 0
    summary = rows(tmp_path / "bench_summary.csv")
    assert summary[0] == ["method", "variant", "p", "n", "mean_time_s", "sd_time_s",
                          "mean_min_rmse", "sd_min_rmse", "mean_auroc", "sd_auroc"]
    assert len(summary) == 3 and all(r[5] == r[7] == r[9] == "" for r in summary[1:])
    report = json.loads((tmp_path / "bench.json").read_text())
    assert len(report["cells"]) == 2 and report["errors"] == []


def test_bench_all_cells_failed(tmp_path):
    assert main(["bench", "--dims", "10", "--seeds", "1", "--jobs", "1",
                 "--out-dir", str(tmp_path)]) == 4
    assert json.loads((tmp_path / "bench.json").read_text())["errors"]


def test_demo_trace(tmp_path):
    assert main(["demo", "--seed", "0", "--out-dir", str(tmp_path)]) == 0
    body = rows(tmp_path / "demo_trace.csv")
    assert body[0] == ["iteration", "coordinate", "method", "grid_beta", "objective", "chosen_beta"]
    groups = {}
    for it, co, method, b, f, chosen in body[1:]:
        groups.setdefault((it, co, method), []).append((float(b), float(f), float(chosen)))
    assert {k[:2] for k in groups if k[2] == "qcd"} == {k[:2] for k in groups if k[2] == "qicd"}
    differs = False
    for (it, co, method), pts in groups.items():
        if method == "qcd":
            best = min(f for _, f, _ in pts)
            chosen = pts[0][2]
            assert min(f for b, f, _ in pts if b == chosen) == best
            differs |= chosen != groups[(it, co, "qicd")][0][2]
    assert differs


def test_int_list():
    assert int_list("1..3,7") == [1, 2, 3, 7]
    assert int_list("100,300") == [100, 300]
