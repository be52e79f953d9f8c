import numpy as np
import pytest

from densderiv import sample_bimodal

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _CRITERIA.setdefault(number, {"title": title, "passed": True, "ran": False, "known": False})
    if report.when == "call":
        entry["ran"] = True
    if report.failed:
        entry["passed"] = False
    elif hasattr(report, "wasxfail") and report.when == "call":
        # an expected failure still means the criterion is not met
        entry["passed"] = False
        entry["known"] = True


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        if not entry["ran"]:
            status = "SKIP"
        else:
            status = "PASS" if entry["passed"] else "FAIL"
        note = " (documented limitation, see README)" if entry["known"] else ""
        terminalreporter.write_line(f"[{status}] criterion {number}: {entry['title']}{note}")


@pytest.fixture(scope="session")
def bimodal200():
    return sample_bimodal(200, seed=1)


@pytest.fixture(scope="session")
def bimodal50():
    return sample_bimodal(50, seed=7)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
