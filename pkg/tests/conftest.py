import os
import sys

import pytest

from hmetric import kernels

sys.path.insert(0, os.path.dirname(__file__))


@pytest.fixture(params=kernels.available())
def backend(request):
    """Run the test once per kernel backend."""
    before = kernels.backend()
    kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(before)


_CRITERIA = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _CRITERIA[name] = (report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA):
        outcome, secs = _CRITERIA[name]
        num = int(name.split("_")[2])
        label = name.split("_", 3)[3].replace("_", " ")
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} {verdict}  {secs:6.2f} s  {label}")
