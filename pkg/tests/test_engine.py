from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from majoperc.closedset import is_closed
from majoperc.engine import (percolates, run_bootstrap, run_bootstrap_async,
                             run_bootstrap_reference)
from majoperc.graph import Graph, VertexSet, sample_gnp
from majoperc.rng import make_rng

from conftest import edge_plus_isolated, graph_and_set, path_graph, star_graph

BOTH = [run_bootstrap, run_bootstrap_reference]


@pytest.mark.parametrize("run", BOTH)
def test_star_from_centre(run):
    res = run(star_graph(4), VertexSet(5, [0]))
    assert res.percolated and res.rounds == 1 and res.trajectory == (1, 5)


@pytest.mark.parametrize("run", BOTH)
def test_isolated_edge_never_infected(run):
    res = run(edge_plus_isolated(), VertexSet.empty(3))
    assert list(res.final_infected) == [2]
    assert not res.percolated and res.trajectory == (0, 1)


@pytest.mark.parametrize("run", BOTH)
def test_path_tie_rule(run):
    res = run(path_graph(3), VertexSet(3, [0]))
    assert res.trajectory == (1, 2, 3) and res.rounds == 2 and res.percolated


@pytest.mark.parametrize("run", BOTH)
def test_empty_graph_infects_everything_in_one_round(run):
    res = run(Graph.empty(4), VertexSet.empty(4))
    assert res.percolated and res.rounds == 1 and res.trajectory == (0, 4)


@pytest.mark.parametrize("run", BOTH)
def test_already_full_takes_no_rounds(run):
    res = run(Graph.complete(4), VertexSet.full(4))
    assert res.rounds == 0 and res.trajectory == (4,) and res.percolated


def test_mismatched_initial_set_rejected():
    with pytest.raises(ValueError):
        run_bootstrap(Graph.empty(3), VertexSet.empty(4))


def _random_instance(rng, max_n, p_values):
    n = int(rng.integers(1, max_n + 1))
    p = float(rng.choice(p_values))
    g = sample_gnp(n, p, int(rng.integers(2**63)))
    init = VertexSet.from_mask(rng.random(n) < rng.random())
    return g, init


def test_frontier_matches_reference_on_random_instances():
    rng = make_rng(2024)
    for _ in range(300):
        g, init = _random_instance(rng, 200, [0.0, 0.05, 0.3, 1.0])
        assert run_bootstrap(g, init) == run_bootstrap_reference(g, init)


@given(graph_and_set(max_n=14))
def test_result_invariants(gs):
    g, init = gs
    res = run_bootstrap(g, init)
    traj = np.array(res.trajectory)
    assert traj[0] == len(init)
    assert np.all(np.diff(traj) > 0)
    assert res.rounds == len(traj) - 1 <= g.n
    assert traj[-1] == len(res.final_infected)
    assert res.percolated == (traj[-1] == g.n)
    assert init.issubset(res.final_infected)
    assert percolates(g, init) == res.percolated


@given(graph_and_set(max_n=14))
def test_fixpoint_is_stable_and_closed_unless_full(gs):
    g, init = gs
    final = run_bootstrap(g, init).final_infected
    again = run_bootstrap(g, final)
    assert again.rounds == 0 and again.final_infected == final
    assert is_closed(g, final) != (len(final) == g.n)


@given(graph_and_set(max_n=14), st.data())
def test_initial_set_monotone(gs, data):
    g, a = gs
    extra = data.draw(st.lists(st.booleans(), min_size=g.n, max_size=g.n))
    b = VertexSet.from_mask(a.mask | np.array(extra, dtype=bool))
    assert run_bootstrap(g, a).final_infected.issubset(run_bootstrap(g, b).final_infected)


@given(graph_and_set(max_n=12), st.integers(0, 2**32))
def test_async_order_reaches_same_fixpoint(gs, seed):
    g, init = gs
    assert run_bootstrap_async(g, init, make_rng(seed)) == run_bootstrap(g, init).final_infected


def test_large_run_sanity():
    g = sample_gnp(20_000, 0.002, 5)
    res = run_bootstrap(g, VertexSet.first(g.n, 12_000))
    assert res == run_bootstrap_reference(g, VertexSet.first(g.n, 12_000))


def test_isolated_uninfected_edge_blocks_percolation():
    # sparse regime below connectivity: an isolated edge with both ends outside
    # the initial set can never be infected, and such edges are common here
    n, m = 10_000, 9_000
    p = 0.3 * np.log(n) / n
    blocked = failed = 0
    for seed in range(60):
        g = sample_gnp(n, p, seed)
        res = run_bootstrap(g, VertexSet.first(n, m))
        u, v = g.edges()
        iso = (g.degrees[u] == 1) & (g.degrees[v] == 1) & (u >= m) & (v >= m)
        if iso.any():
            blocked += 1
            assert not res.percolated
            assert not np.any(res.final_infected.mask[u[iso]])
        failed += not res.percolated
    expected_edges = n * (n - 1) / 2 * p * (1 - p) ** (2 * (n - 2)) * (n - m) * (n - m - 1) / (n * (n - 1))
    assert 0.5 < expected_edges < 0.6
    assert blocked > 10 and failed >= blocked
