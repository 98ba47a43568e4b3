import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


def unit_disk(rng, k, radius=1.0):
    return radius * np.sqrt(rng.uniform(0, 1, k)) * np.exp(2j * np.pi * rng.uniform(0, 1, k))


def match_multisets(found, expected):
    """Largest distance in an optimal one-to-one matching of two point sets."""
    from scipy.optimize import linear_sum_assignment

    cost = np.abs(np.asarray(found)[:, None] - np.asarray(expected)[None, :])
    i, j = linear_sum_assignment(cost)
    return cost[i, j].max()


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
