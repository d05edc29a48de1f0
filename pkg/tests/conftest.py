import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from skewtor.families import build_example_4d, build_example_5d, build_flat_hyper

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def spec4():
    return build_example_4d()


@pytest.fixture(scope="session")
def spec5():
    return build_example_5d()


@pytest.fixture(scope="session")
def flat8():
    return build_flat_hyper(2)


@pytest.fixture(scope="session")
def all_specs(spec4, spec5, flat8):
    return [spec4, spec5, flat8]


def rational_point(names, seed):
    rng = random.Random(seed)
    return {n: Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for n in names}


_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" in report.nodeid:
        if report.when == "call" or report.outcome != "passed":
            _ACCEPTANCE.setdefault(report.nodeid, report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in sorted(_ACCEPTANCE.items()):
        name = nodeid.split("test_criterion_", 1)[1]
        number, title = name.split("_", 1)
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {int(number):2d}  {verdict}  {title.replace('_', ' ')}")
