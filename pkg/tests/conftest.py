import numpy as np
import pytest

from jacobimult.jacobi import JacobiParams

PARAM_GRID = [(-0.5, -0.5), (0.0, 0.0), (0.5, 0.5), (0.0, 1.3)]


@pytest.fixture(params=PARAM_GRID, ids=lambda ab: f"a{ab[0]}_b{ab[1]}")
def params(request):
    return JacobiParams(*request.param)


@pytest.fixture
def legendre():
    return JacobiParams(0.0, 0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
