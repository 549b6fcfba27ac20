import numpy as np
import pytest

from blscaling import VelocityProfile, predict_scaling_law

_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        _acceptance[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance.items():
        tag = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}.get(outcome, outcome.upper())
        terminalreporter.write_line(f"{tag:5} {name}")


def make_profile(y, u, run_id="t", re_theta=1.0e4, **meta):
    return VelocityProfile(run_id, re_theta, np.asarray(y, float), np.asarray(u, float), **meta)


@pytest.fixture
def log_grid():
    return np.geomspace(1.0, 1.0e4, 200)


@pytest.fixture
def scaling_profile(log_grid):
    return make_profile(log_grid, predict_scaling_law(log_grid, 11.33), run_id="law-11.33")


@pytest.fixture
def log_law_profile(log_grid):
    return make_profile(log_grid, np.log(log_grid) / 0.38 + 4.1, run_id="loglaw")
