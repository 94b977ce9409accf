import numpy as np
import pytest

_criterion_results: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(num, label): ties a test to an acceptance criterion"
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    num, label = marker.args
    entry = _criterion_results.setdefault(num, [label, True])
    entry[1] = entry[1] and report.passed


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _criterion_results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criterion_results):
        label, passed = _criterion_results[num]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} ({label}): {status}")
