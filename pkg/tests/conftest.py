"""Shared pytest configuration: one summary line per acceptance criterion."""

from __future__ import annotations

import re

_RESULTS: dict[int, tuple[str, str, str]] = {}
_NAME = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_runtest_logreport(report) -> None:
    match = _NAME.search(report.nodeid)
    if match is None:
        return
    number, title = int(match.group(1)), match.group(2).replace("_", " ")
    if report.when == "call" or (report.when == "setup" and not report.passed):
        status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
        detail = "; ".join(f"{k}={v}" for k, v in report.user_properties)
        _RESULTS[number] = (status, title, detail)


def pytest_terminal_summary(terminalreporter) -> None:
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        status, title, detail = _RESULTS[number]
        line = f"criterion {number:2d} {status}: {title}"
        terminalreporter.write_line(f"{line}  [{detail}]" if detail else line)
