import pytest

from divtop.sieve import build_tables


@pytest.fixture(scope="session")
def small():
    return build_tables(5000)


@pytest.fixture(scope="session")
def million():
    return build_tables(10**6)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance")), None)
    results = getattr(mod, "RESULTS", None)
    if results:
        lines = [results[k] for k in sorted(results)]
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
