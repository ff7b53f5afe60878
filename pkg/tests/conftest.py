import pytest

from frtbialg import load_instance


@pytest.fixture(scope="session")
def i1():
    return load_instance("example-4-1-i1")


@pytest.fixture(scope="session")
def i2():
    return load_instance("example-4-1-i2")


@pytest.fixture(scope="session")
def m2():
    return load_instance("example-4-1-m2")


ACCEPTANCE: dict[int, str] = {}
_COLLECTED = {"acceptance": False}


def pytest_collection_modifyitems(items):
    _COLLECTED["acceptance"] = any(item.module.__name__ == "test_acceptance" for item in items)


def pytest_terminal_summary(terminalreporter):
    if not _COLLECTED["acceptance"]:
        return
    from test_acceptance import TITLES
    terminalreporter.section("acceptance criteria")
    for n in sorted(TITLES):
        terminalreporter.write_line(ACCEPTANCE.get(n, f"criterion {n} NOT RUN: {TITLES[n]}"))
