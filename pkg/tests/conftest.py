import sys

import pytest

try:
    from threadpoolctl import threadpool_limits
except ImportError:
    threadpool_limits = None


@pytest.fixture(scope="session", autouse=True)
def single_threaded_blas():
    """Pin BLAS to one thread: the solves are tiny and threading only hurts."""
    if threadpool_limits is None:
        yield
        return
    with threadpool_limits(limits=1):
        yield


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    acceptance = sys.modules.get("tests.test_acceptance") or sys.modules.get("test_acceptance")
    if acceptance is None or not getattr(acceptance, "REPORT_LINES", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance.REPORT_LINES:
        terminalreporter.write_line(line)
