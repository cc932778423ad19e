import numpy as np
import pytest

from divisorlab import DeltaEvaluator, sieve_dk

_CRITERION_LINES = []


def record_criterion(number: int, passed: bool, detail: str) -> None:
    """Collect one acceptance line; printed in the terminal summary."""
    line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'} - {detail}"
    _CRITERION_LINES.append((number, line))
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_CRITERION_LINES):
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def criterion():
    return record_criterion


@pytest.fixture(scope="session")
def table2():
    return sieve_dk(2, 20000)


@pytest.fixture(scope="session")
def table3():
    return sieve_dk(3, 20000)


@pytest.fixture(scope="session")
def ev2():
    return DeltaEvaluator.for_k(2, 10**5)


@pytest.fixture(scope="session")
def ev3():
    return DeltaEvaluator.for_k(3, 10**5)


@pytest.fixture(scope="session")
def ev2_big():
    """k = 2 evaluator wide enough for the 10^7-scale acceptance runs."""
    return DeltaEvaluator.for_k(2, 10100001)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(12345)
