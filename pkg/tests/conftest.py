import re
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")
_outcomes = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or report.outcome != "passed":
        entry = _outcomes.setdefault(int(m.group(1)), {"passed": 0, "failed": 0})
        entry["passed" if report.outcome == "passed" else "failed"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_outcomes):
        entry = _outcomes[number]
        status = "PASS" if entry["failed"] == 0 else "FAIL"
        total = entry["passed"] + entry["failed"]
        terminalreporter.write_line(f"criterion {number}: {status} ({entry['passed']}/{total} checks)")
