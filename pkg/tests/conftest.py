import numpy as np
import pytest

from zetaweyl import arith
from zetaweyl import zero_finder as zf


@pytest.fixture(scope="session")
def zeros_1e5():
    """All zeros up to height 1e5 (138069 of them), scanned once per session."""
    return zf.compute_zeros(1.0e5)


@pytest.fixture(scope="session")
def first_1e5(zeros_1e5):
    return zeros_1e5.head(100_000)


@pytest.fixture(scope="session")
def sieve():
    return arith.lambda_sieve(10**6)


@pytest.fixture
def rng():
    return np.random.default_rng(20240229)


_ACCEPTANCE = []


def record(line):
    _ACCEPTANCE.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
