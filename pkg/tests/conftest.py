from functools import lru_cache

import pytest

from runcube.graph import build_graph


@lru_cache(maxsize=None)
def cached_graph(family: str, n: int):
    return build_graph(family, n)


@pytest.fixture
def run_graph():
    return lambda n: cached_graph("run", n)


@pytest.fixture
def fib_graph():
    return lambda n: cached_graph("fibcube", n)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
