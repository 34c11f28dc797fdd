import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from blowup.denjoy import DenjoySystem
from blowup.skew import default_qpf

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_criteria = {}


@pytest.fixture(scope="session")
def qpf():
    return default_qpf()


@pytest.fixture(scope="session")
def qpf_osc():
    return default_qpf("oscillating")


@pytest.fixture(scope="session")
def denjoy_sys():
    return DenjoySystem.build()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    if report.when == "call" or report.outcome != "passed":
        _criteria[props["criterion"]] = (report.outcome, props.get("detail", ""), props.get("title", ""))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_criteria):
        outcome, detail, title = _criteria[n]
        status = "PASS" if outcome == "passed" else "FAIL"
        tr.write_line(f"[{status}] criterion {n:2d} {title}: {detail}")
