from importlib import resources

import pytest

from qccycles.io import parse_exponent_file

# filled by test_acceptance; printed once at the end of the session
ACCEPTANCE_LINES: list[str] = []


def fixture_text(name: str) -> str:
    return (resources.files("qccycles") / "data" / name).read_text()


def load_fixture(name: str):
    return parse_exponent_file(fixture_text(name))


@pytest.fixture(scope="session")
def ex1():
    return load_fixture("ex1.qc")


@pytest.fixture(scope="session")
def ex2():
    return load_fixture("ex2.qc")


@pytest.fixture(scope="session")
def ex4():
    return load_fixture("ex4.qc")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
