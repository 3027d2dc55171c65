import numpy as np
import pytest

from cantorlab.geometry import BoxDomain, build_scaffold, make_schedule
from cantorlab.lusin import build_lusin, heisenberg_datum, minimal_eta

# a single root cube of side 0.01 centred at the origin
SOBOLEV_BOX = BoxDomain((-0.0051, -0.0051), (0.0051, 0.0051))


@pytest.fixture(scope="session")
def sobolev_scaffold():
    sched = make_schedule("sobolev", 2, 10, 0.01, 0.25)
    return build_scaffold(SOBOLEV_BOX, sched, 6)


@pytest.fixture(scope="session")
def heisenberg_build(sobolev_scaffold):
    F = heisenberg_datum(SOBOLEV_BOX)
    u = build_lusin(F, sobolev_scaffold, 6, minimal_eta(F, sobolev_scaffold.delta))
    return u, F


@pytest.fixture(scope="session")
def dimension_scaffold():
    sched = make_schedule("dimension", 2, 1, 0.1, 1.0)
    return build_scaffold(BoxDomain.cube(2), sched, 8)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
