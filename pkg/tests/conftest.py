import os

import pytest
from hypothesis import HealthCheck, settings

from stabcat.corpus import P3, cat_fixtures, preord_fixtures

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def pf():
    return preord_fixtures()


@pytest.fixture(scope="session")
def cf():
    return cat_fixtures()


@pytest.fixture(scope="session")
def p3():
    return P3()


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
