from __future__ import annotations

import numpy as np
from hypothesis import settings, strategies as st

from majoperc.graph import Graph, VertexSet, pair_count, pair_index_to_edge

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 12) -> Graph:
    n = draw(st.integers(min_n, max_n))
    bits = draw(st.lists(st.booleans(), min_size=pair_count(n), max_size=pair_count(n)))
    idx = np.flatnonzero(np.array(bits, dtype=bool))
    u, v = pair_index_to_edge(n, idx)
    return Graph.from_edges(n, np.column_stack([u, v]).reshape(-1, 2))


@st.composite
def graph_and_set(draw, min_n: int = 1, max_n: int = 12):
    g = draw(graphs(min_n, max_n))
    mask = draw(st.lists(st.booleans(), min_size=g.n, max_size=g.n))
    return g, VertexSet.from_mask(mask)


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def edge_plus_isolated() -> Graph:
    """Edge {0, 1} and the isolated vertex 2."""
    return Graph.from_edges(3, [(0, 1)])


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])
