from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given

from majoperc.closedset import MAX_ENUM_N, enumerate_closed_masks, enumerate_closed_sets, is_closed
from majoperc.engine import run_bootstrap
from majoperc.graph import Graph, VertexSet, sample_gnp

from conftest import edge_plus_isolated, graph_and_set, graphs


def closed_by_definition(g: Graph, s: VertexSet) -> bool:
    """Transcription of the definition, one vertex at a time."""
    return len(s) < g.n and all(
        2 * sum(1 for w in g.adjacency(v) if w in s) < len(g.adjacency(v))
        for v in range(g.n) if v not in s)


def test_complete_graph_pair_not_closed():
    assert not is_closed(Graph.complete(5), VertexSet(5, [0, 1]))


def test_isolated_vertex_alone_is_closed():
    assert is_closed(edge_plus_isolated(), VertexSet(3, [2]))


def test_degree_zero_outside_breaks_closedness():
    assert not is_closed(Graph.empty(3), VertexSet(3, [0]))


def test_full_set_is_not_closed():
    assert not is_closed(Graph.complete(3), VertexSet.full(3))


def test_empty_set_closed_iff_no_isolated_vertex():
    assert is_closed(Graph.complete(3), VertexSet.empty(3))
    assert not is_closed(edge_plus_isolated(), VertexSet.empty(3))


def test_enumerate_empty_graph():
    assert enumerate_closed_sets(Graph.empty(3)) == []


def test_enumerate_triangle():
    assert enumerate_closed_sets(Graph.complete(3)) == [VertexSet.empty(3)]


def test_enumerate_guard():
    with pytest.raises(ValueError):
        enumerate_closed_sets(Graph.empty(MAX_ENUM_N + 1))


@given(graph_and_set(max_n=14))
def test_is_closed_matches_definition(gs):
    g, s = gs
    assert is_closed(g, s) == closed_by_definition(g, s)


@given(graphs(max_n=9))
def test_enumeration_matches_brute_force(g):
    expected = [b for b in range(2 ** g.n) if closed_by_definition(g, VertexSet.from_bits(g.n, b))]
    assert enumerate_closed_masks(g).tolist() == expected


def test_enumeration_sorted_and_proper():
    g = sample_gnp(16, 0.3, 3)
    masks = enumerate_closed_masks(g)
    assert np.all(np.diff(masks) > 0)
    assert (1 << 16) - 1 not in masks.tolist()


def test_fixpoints_are_listed_closed_sets():
    rng = np.random.default_rng(7)
    for seed in range(200):
        n = int(rng.integers(2, 15))
        g = sample_gnp(n, float(rng.uniform(0.1, 0.6)), seed)
        closed = set(enumerate_closed_masks(g).tolist())
        for _ in range(10):
            init = VertexSet.from_mask(rng.random(n) < 0.4)
            res = run_bootstrap(g, init)
            if not res.percolated:
                assert res.final_infected.to_bits() in closed
                assert init.issubset(res.final_infected)


def test_percolation_criterion_exhaustive_n10():
    for seed in range(5):
        g = sample_gnp(10, 0.35, 100 + seed)
        closed = enumerate_closed_masks(g).tolist()
        for bits in range(1 << 10):
            contained = any(bits & c == bits for c in closed)
            assert run_bootstrap(g, VertexSet.from_bits(10, bits)).percolated == (not contained)
