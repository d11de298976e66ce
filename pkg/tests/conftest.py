import pytest

from goedel_omega.embedding import builtin_reals
from goedel_omega.parser import StreamRegistry

_criteria: list[tuple[str, str]] = []


@pytest.fixture(scope="session")
def reals():
    return builtin_reals()


@pytest.fixture
def registry():
    return StreamRegistry.default()


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    if "test_acceptance.py" not in report.nodeid:
        return
    label = dict(report.user_properties).get("criterion")
    if label is not None:
        _criteria.append(("PASS" if report.passed else "FAIL", label))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for outcome, label in _criteria:
        terminalreporter.write_line(f"{outcome}  {label}")
