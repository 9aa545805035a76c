import sys
import itertools

import pytest
from hypothesis import strategies as st

from minfer.graph import BIDIR, EDGE, FWD, MINUS, PLUS, REV, Graph, GraphKind

LABELS = {
    GraphKind.UNDIRECTED: [EDGE],
    GraphKind.DIRECTED: [FWD, REV, BIDIR],
    GraphKind.SIGNED: [PLUS, MINUS],
}


def complete(n, kind="undirected"):
    return Graph.from_edges(kind, itertools.combinations(range(n), 2))


def path(n):
    return Graph.from_edges("undirected", [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return Graph.from_edges("undirected", [(i, (i + 1) % n) for i in range(n)])


def star(leaves):
    return Graph.from_edges("undirected", [(0, i) for i in range(1, leaves + 1)])


@st.composite
def labeled_graphs(draw, kind=None, min_nodes=3, max_nodes=10):
    if kind is None:
        kind = draw(st.sampled_from(list(GraphKind)))
    kind = GraphKind(kind)
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = list(itertools.combinations(range(n), 2))
    present = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    labels = draw(st.lists(st.sampled_from(LABELS[kind]), min_size=len(pairs), max_size=len(pairs)))
    # spread node ids out so the numeric order is not just 0..n-1
    ids = draw(st.lists(st.integers(0, 500), min_size=n, max_size=n, unique=True))
    edges = [(ids[a], ids[b], lab) for (a, b), p, lab in zip(pairs, present, labels) if p]
    return Graph.from_edges(kind, edges, nodes=ids)


@pytest.fixture
def k3():
    return complete(3)


@pytest.fixture
def k4():
    return complete(4)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
