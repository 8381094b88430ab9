"""CSV and JSON readers/writers for the command-line tools.

Floats are written with ``repr``, the shortest text that parses back to
the same double, so every file round-trips bit for bit.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .bench import SUMMARY_COLUMNS, BenchReport
from .core import Dataset
from .demo import TRACE_COLUMNS, DemoTrace
from .path import SolutionPath


class DataError(ValueError):
    """Malformed or inconsistent input file."""


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(header)
        for row in rows:
            out.writerow([fmt(v) for v in row])


def read_numeric_csv(path, expect_header=None) -> tuple:
    """Read a headed CSV of reals into ``(header, array)``.

    Errors name the file, the 1-based line and the column.
    """
    path = Path(path)
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise DataError(f"{path}: cannot open ({exc.strerror})") from None
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataError(f"{path}: empty file")
        header = [h.strip() for h in header]
        if expect_header is not None and header != list(expect_header):
            raise DataError(f"{path}: header {header} does not match {list(expect_header)}")
        rows = []
        for line, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise DataError(f"{path}: line {line} has {len(row)} fields, expected {len(header)}")
            vals = []
            for col, cell in enumerate(row):
                try:
                    vals.append(float(cell))
                except ValueError:
                    raise DataError(f"{path}: line {line}, column {col + 1} ({header[col]}): "
                                    f"cannot parse {cell!r} as a number") from None
            rows.append(vals)
    arr = np.array(rows, dtype=np.float64).reshape(len(rows), len(header))
    if not np.all(np.isfinite(arr)):
        line, col = (int(k) for k in np.argwhere(~np.isfinite(arr))[0])
        raise DataError(f"{path}: line {line + 2}, column {col + 1}: non-finite value")
    return header, arr


def write_dataset(out_dir, dataset: Dataset, beta_true=None) -> None:
    out_dir = Path(out_dir)
    write_csv(out_dir / "X.csv", [f"x{j + 1}" for j in range(dataset.p)], dataset.x)
    write_csv(out_dir / "y.csv", ["y"], dataset.y[:, None])
    if beta_true is not None:
        write_csv(out_dir / "truth.csv", ["j", "beta_true"],
                  ((j + 1, b) for j, b in enumerate(beta_true)))


def read_dataset(data_dir) -> Dataset:
    data_dir = Path(data_dir)
    _, x = read_numeric_csv(data_dir / "X.csv")
    _, y = read_numeric_csv(data_dir / "y.csv", ["y"])
    if x.shape[0] != y.shape[0]:
        raise DataError(f"X.csv has {x.shape[0]} rows but y.csv has {y.shape[0]}")
    if x.shape[0] == 0 or x.shape[1] == 0:
        raise DataError("X.csv holds no data")
    return Dataset(x, y[:, 0])


def write_beta(path, beta) -> None:
    write_csv(path, ["j", "beta"], ((j + 1, b) for j, b in enumerate(beta)))


def read_beta(path) -> np.ndarray:
    _, arr = read_numeric_csv(path, ["j", "beta"])
    return arr[:, 1].copy()


def path_rows(path: SolutionPath):
    """Nonzero coefficients (1-based ``j``) and a ``j = -1`` sweeps row per penalty."""
    for lam, beta, diag in zip(path.lambdas, path.betas, path.diagnostics):
        for j in np.flatnonzero(beta):
            yield lam, int(j) + 1, beta[j]
        yield lam, -1, diag["sweeps"]


def write_path(out_dir, path: SolutionPath, meta: dict) -> None:
    out_dir = Path(out_dir)
    write_csv(out_dir / "path.csv", ["lambda", "j", "beta"], path_rows(path))
    meta = dict(meta, method=path.method, penalty=path.penalty,
                grid=[float(v) for v in path.grid],
                lambdas=[float(v) for v in path.lambdas],
                diagnostics=path.diagnostics)
    with open(out_dir / "path_meta.json", "w") as fh:
        json.dump(meta, fh, indent=1)


def read_path(path_csv, p: int):
    """Rebuild ``(lambdas, betas, sweeps)`` from a ``path.csv`` file.

    Penalty values are recovered in file order from the diagnostic rows,
    which close each block.
    """
    _, arr = read_numeric_csv(path_csv, ["lambda", "j", "beta"])
    lambdas, betas, sweeps = [], [], []
    current = np.zeros(p)
    for lam, j, val in arr:
        if j == -1:
            lambdas.append(lam)
            betas.append(current)
            sweeps.append(int(val))
            current = np.zeros(p)
        else:
            k = int(j) - 1
            if not 0 <= k < p:
                raise DataError(f"{path_csv}: coefficient index {int(j)} outside 1..{p}")
            current[k] = val
    return np.array(lambdas), np.array(betas).reshape(len(betas), p), sweeps


def write_bench(out_dir, report: BenchReport) -> None:
    out_dir = Path(out_dir)
    report.to_json(out_dir / "bench.json")
    write_csv(out_dir / "bench_summary.csv", SUMMARY_COLUMNS,
              ([row[c] for c in SUMMARY_COLUMNS] for row in report.summary()))


def write_trace(path, trace: DemoTrace) -> None:
    write_csv(path, TRACE_COLUMNS, trace.rows())
