import pytest

from helpers import line


@pytest.fixture
def line013():
    return line(0, 1, 3)


@pytest.fixture
def line012():
    return line(0, 1, 2)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num][1])
