import itertools
from pathlib import Path

import pytest
from hypothesis import strategies as st

from artinkit.graph import LabelledGraph, parse_graph

DATA = Path(__file__).parent / "data"


def load(name: str) -> LabelledGraph:
    return parse_graph((DATA / name).read_text())


@pytest.fixture
def gamma1():
    return load("gamma1.graph")


@pytest.fixture
def gamma2():
    return load("gamma2.graph")


@pytest.fixture
def gamma4():
    return load("gamma4.graph")


@st.composite
def labelled_graphs(draw, max_vertices=7, labels=st.integers(2, 8), min_vertices=1):
    n = draw(st.integers(min_vertices, max_vertices))
    names = [f"v{i}" for i in range(n)]
    edges = {}
    for u, v in itertools.combinations(names, 2):
        if draw(st.booleans()):
            edges[frozenset((u, v))] = draw(labels)
    return LabelledGraph(tuple(names), edges)


# acceptance criteria record one verdict line each; printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def criterion(request):
    def record(number: int, title: str, passed: bool, detail: str = "") -> None:
        line = f"criterion {number:2d} [{'PASS' if passed else 'FAIL'}] {title}" + (f" -- {detail}" if detail else "")
        ACCEPTANCE_LINES[number] = line
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
