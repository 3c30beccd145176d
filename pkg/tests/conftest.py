import pytest

from modlg.lifting import teichmuller_unit
from oracles import delta_fixture


@pytest.fixture(scope="session")
def delta_full():
    return delta_fixture(3)


@pytest.fixture(scope="session")
def delta_teichmuller():
    return delta_fixture(teichmuller_unit(7))


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
