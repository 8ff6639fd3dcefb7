from fractions import Fraction

import pytest

from nswhard.graphs import generate_family, parse_graph
from nswhard.reduction import ReductionParams, build_instance

# K4 exactly as numbered in the worked example: e1={v1,v2}, e2={v2,v3}, e3={v3,v4},
# e4={v1,v4}, e5={v1,v3}, e6={v2,v4}, with v_i stored as vertex i-1.
K4_EXAMPLE_TEXT = "4 6\n0 1\n1 2\n2 3\n0 3\n0 2\n1 3\n"

NAMED = ("k4", "k33", "prism", "petersen")

_results: list[tuple[str, bool, str]] = []


@pytest.fixture(scope="session")
def k4_example():
    return parse_graph(K4_EXAMPLE_TEXT)


@pytest.fixture(scope="session")
def k4_example_inst(k4_example):
    return build_instance(k4_example, ReductionParams(Fraction(1), Fraction(1, 100)))


@pytest.fixture(scope="session")
def graphs():
    return {name: generate_family(name) for name in NAMED}


@pytest.fixture(scope="session")
def instances(graphs):
    return {name: build_instance(g) for name, g in graphs.items()}


@pytest.fixture
def record_criterion():
    """Acceptance tests report one PASS/FAIL line per criterion via this hook."""

    def record(name: str, passed: bool, detail: str = ""):
        _results.append((name, passed, detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _results:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")
