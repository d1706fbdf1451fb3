import numpy as np
import pytest

from weakdiscord import states


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def bell_example():
    return states.bell_diagonal((0.1, 0.2, 0.3))


@pytest.fixture(scope="session")
def phi_plus():
    return states.bell_diagonal((1.0, -1.0, 1.0))


@pytest.fixture(scope="session")
def corpus():
    """Small regression corpus of random two-qubit states."""
    return [states.random_state(2, 4, s) for s in range(1, 9)]


_CRITERIA = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_CRITERIA] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line; printed now and again in the terminal summary."""
    def record(number, title, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title} ({detail})"
        request.config.stash[_CRITERIA].append(line)
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_CRITERIA, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
