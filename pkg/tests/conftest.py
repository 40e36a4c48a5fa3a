import math

import pytest

from fucik.presets import preset_problem

ACCEPTANCE_LINES = {}


@pytest.fixture(scope="session")
def classical():
    return preset_problem("classical")


@pytest.fixture(scope="session")
def sine2pi():
    return preset_problem("sine")


@pytest.fixture(scope="session")
def sine3pi():
    return preset_problem(f"sine:{3 * math.pi!r}")


@pytest.fixture(scope="session")
def example313():
    return preset_problem("example_3_13")


@pytest.fixture(scope="session")
def even():
    return preset_problem("even")


@pytest.fixture(scope="session")
def bump():
    return preset_problem("bump")


@pytest.fixture(scope="session")
def remark39():
    return preset_problem("remark_3_9")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
