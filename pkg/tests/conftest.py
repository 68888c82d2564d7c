import numpy as np
import pytest

from zsa.strips import ZeroStore


@pytest.fixture(scope="session")
def store():
    """One zero store for the whole run; heights only ever grow."""
    return ZeroStore()


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


# One line per acceptance criterion, printed after the pytest summary so
# the verdicts survive output capture.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
