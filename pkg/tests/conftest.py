import numpy as np
import pytest

from krein_riccati.dense import make_rng


@pytest.fixture
def rng():
    return make_rng(12345)


def jordan(lam, size):
    return lam * np.eye(size, dtype=complex) + np.diag(np.ones(size - 1), 1)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
