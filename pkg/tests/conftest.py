import numpy as np
import pytest

TAUS = (0.1, 0.3, 0.5, 0.7, 0.9)

ACCEPTANCE_LINES = []


def random_instance(rng, max_n=30, lam_max=2.0):
    """Random coordinate problem: residuals, signed predictors, tau, lambda.

    About a third of the draws use integer-valued residuals so that tied
    breakpoints show up regularly; some predictors are exactly zero.
    """
    n = int(rng.integers(1, max_n + 1))
    if rng.random() < 1 / 3:
        v = rng.integers(-4, 5, n).astype(float)
    else:
        v = rng.normal(0.0, 2.0, n)
    x = rng.normal(0.0, 1.0, n)
    x[rng.random(n) < 0.1] = 0.0
    if rng.random() < 0.2:
        x = np.round(x * 2) / 2
    tau = float(rng.choice(TAUS))
    lam = 0.0 if rng.random() < 0.1 else float(rng.uniform(0.0, lam_max))
    return v, x, tau, lam


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line[1])
