"""Collects acceptance-criterion verdicts and prints one line per criterion."""

from __future__ import annotations

import pytest

_RESULTS: dict[int, dict] = {}


class Criterion:
    def __init__(self, number: int, title: str):
        self.entry = _RESULTS.setdefault(number, {"title": title, "detail": "", "outcome": "not run"})

    def note(self, detail: str) -> None:
        self.entry["detail"] = detail


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): an acceptance criterion")


@pytest.fixture
def criterion(request):
    return Criterion(*request.node.get_closest_marker("criterion").args)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or not (report.when == "call" or report.failed):
        return
    entry = Criterion(*marker.args).entry
    entry["outcome"] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        entry = _RESULTS[number]
        line = f"criterion {number:2d}: {entry['outcome']} - {entry['title']}"
        if entry["detail"]:
            line += f" [{entry['detail']}]"
        terminalreporter.write_line(line)
