import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

from hypothesis import settings

settings.register_profile("repo", derandomize=True, deadline=None, max_examples=100, database=None)
settings.load_profile("repo")

_CRITERIA: dict[str, list[bool]] = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.split("::")[-1]
    if not name.startswith("test_criterion_") or report.when != "call" and not report.failed:
        return
    num = name.split("_")[2]
    _CRITERIA.setdefault(num, []).append(report.passed if report.when == "call" else False)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA, key=int):
        status = "PASS" if all(_CRITERIA[num]) else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {status}")
