"""Prints one PASS/FAIL line per acceptance criterion at the end of the run."""

import pytest

_criteria = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or report.failed:
        detail = "; ".join(str(v) for k, v in report.user_properties if k == "detail")
        _criteria[report.nodeid] = (report.outcome, detail)


@pytest.hookimpl(trylast=True)
def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid in sorted(_criteria):
        outcome, detail = _criteria[nodeid]
        name = nodeid.split("::")[-1].removeprefix("test_criterion_")
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status} {name}" + (f" ({detail})" if detail else ""))
