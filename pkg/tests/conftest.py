"""Acceptance bookkeeping: tests marked ``criterion(label)`` are rolled up into
one pass/fail line per label at the end of the run."""

from __future__ import annotations

_outcomes: dict[str, list[bool]] = {}
_labels: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion this test belongs to")


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker is not None:
            _labels[item.nodeid] = marker.args[0]
            _outcomes.setdefault(marker.args[0], [])


def pytest_runtest_logreport(report):
    label = _labels.get(report.nodeid)
    if label is None:
        return
    if report.when == "call" or report.failed or report.skipped:
        _outcomes[label].append(report.passed and report.when == "call")


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_outcomes, key=lambda s: int(s.split()[0][2:])):
        results = _outcomes[label]
        ok = bool(results) and all(results)
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"{status}  {label}  ({sum(results)}/{len(results)} tests)")

