import os

import pytest
from hypothesis import HealthCheck, settings

from matroidkit import families as F

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=150, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def swirl4():
    return F.free_swirl(4)


@pytest.fixture(scope="session")
def swirl5():
    return F.free_swirl(5)


@pytest.fixture(scope="session")
def u24():
    return F.uniform(2, 4)



ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip("."))):
            terminalreporter.write_line(line)
