import numpy as np
import pytest

from qldpc_beam.codes import preset_problem

# acceptance criteria report their verdicts here; printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def rep5_problem():
    return preset_problem("rep5", 0.15)[1]


@pytest.fixture(scope="session")
def bb72_x():
    return preset_problem("bb72", 0.05, "X", "XZ")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
