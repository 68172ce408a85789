"""Collect acceptance-criterion outcomes and print one line per criterion."""

import re

import pytest

_outcomes: dict[str, dict] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    key = str(number)
    entry = _outcomes.setdefault(key, {"title": title, "status": "PASS", "detail": ""})
    if report.when == "call" or (report.when == "setup" and not report.passed):
        if report.skipped:
            entry["status"] = "SKIP"
            entry["detail"] = str(report.longrepr[2]) if isinstance(report.longrepr, tuple) else ""
        elif report.failed:
            entry["status"] = "FAIL"
            entry["detail"] = report.longreprtext.strip().splitlines()[-1] if report.longreprtext else ""
        details = [v for k, v in item.user_properties if k == "detail"]
        if details and entry["status"] != "SKIP":
            entry["detail"] = "; ".join(details) + (f" | {entry['detail']}" if entry["status"] == "FAIL" else "")


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")

    def order(key):
        m = re.match(r"(\d+)(.*)", key)
        return int(m.group(1)), m.group(2)

    for key in sorted(_outcomes, key=order):
        e = _outcomes[key]
        line = f"[{e['status']}] criterion {key}: {e['title']}"
        if e["detail"]:
            line += f" ({e['detail']})"
        terminalreporter.write_line(line)
