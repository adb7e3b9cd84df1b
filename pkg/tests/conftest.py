from __future__ import annotations

import pytest

_results: list = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _results.append((mark.args[0], mark.args[1], report.passed, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, duration in sorted(_results):
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2} {verdict}  {title} ({duration:.2f}s)")
