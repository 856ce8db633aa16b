import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bbqmis.bb import BBConfig, bbq_mis
from bbqmis.bench import gnp_graph, random_udg
from bbqmis.bounds import bounds_report
from bbqmis.coloring import exact_chromatic, greedy_it_mis, verify_coloring
from bbqmis.graph import Graph, complete_graph, cycle_graph, edgeless_graph, path_graph
from bbqmis.sampling import ExactSampler, RandomGreedySampler, SampleHistogram

from conftest import graphs, random_graph
from test_coloring import JunkSampler

UNBOUNDED = dict(node_budget=None)


def test_triangle():
    c, rep = bbq_mis(complete_graph(3), ExactSampler())
    assert c.k == 3 and rep.nodes_explored <= 4
    assert rep.terminated_by == "optimality"


def test_c5():
    c, rep = bbq_mis(cycle_graph(5), ExactSampler(), BBConfig(**UNBOUNDED))
    assert c.k == 3 == exact_chromatic(cycle_graph(5))[0]
    assert verify_coloring(cycle_graph(5), c)


def test_edgeless_and_path():
    c, rep = bbq_mis(edgeless_graph(4), ExactSampler())
    assert c.k == 1 and rep.nodes_explored == 0 and rep.leaves == 1
    c, _ = bbq_mis(path_graph(6), ExactSampler())
    assert c.k == 2
    with pytest.raises(ValueError):
        bbq_mis(edgeless_graph(0), ExactSampler())


def test_config_validation():
    with pytest.raises(ValueError):
        BBConfig(exploration="random")
    with pytest.raises(ValueError):
        BBConfig(workers=0)
    with pytest.raises(ValueError):
        BBConfig(node_budget=0)
    cfg = BBConfig(node_budget=7, exploration="gap")
    assert BBConfig.from_dict(cfg.to_dict()) == cfg


@given(graphs(min_n=1, max_n=10), st.integers(0, 1000))
def test_exact_with_exhaustive_sampler(g, seed):
    c, rep = bbq_mis(g, ExactSampler(), BBConfig(seed=seed, **UNBOUNDED))
    assert verify_coloring(g, c)
    assert c.k == exact_chromatic(g)[0]
    assert rep.terminated_by == "optimality"


def test_exact_up_to_twelve():
    rng = np.random.default_rng(12)
    for _ in range(40):
        g = random_graph(rng, int(rng.integers(10, 13)), rng.uniform(0.2, 0.5))
        c, _ = bbq_mis(g, ExactSampler(), BBConfig(**UNBOUNDED))
        assert c.k == exact_chromatic(g)[0]


@given(graphs(min_n=1, max_n=10), st.integers(0, 1000))
def test_sandwich(g, seed):
    chi = exact_chromatic(g)[0]
    bb = bbq_mis(g, ExactSampler(), BBConfig(seed=seed, **UNBOUNDED))[0].k
    gr = greedy_it_mis(g, ExactSampler(), None, seed)[0].k
    assert chi <= bb <= gr


@given(graphs(min_n=1, max_n=10), st.integers(0, 1000))
def test_report_invariants(g, seed):
    budget = 5
    c, rep = bbq_mis(g, RandomGreedySampler(), BBConfig(node_budget=budget, shots=30, seed=seed))
    assert verify_coloring(g, c)
    assert rep.nodes_explored <= budget
    assert rep.terminated_by in ("optimality", "node_budget")
    trace = rep.incumbent_trace
    assert trace[0] == g.n and trace[-1] == c.k
    assert all(b < a for a, b in zip(trace, trace[1:]))
    assert rep.shots_consumed == 30 * rep.nodes_explored


def test_budget_termination():
    g = random_udg(15, 20.0, 7.5, 4.0, np.random.default_rng(3))
    _, full = bbq_mis(g, ExactSampler(), BBConfig(**UNBOUNDED))
    assert full.nodes_explored > 3
    c, rep = bbq_mis(g, ExactSampler(), BBConfig(node_budget=3))
    assert rep.nodes_explored == 3 and rep.terminated_by == "node_budget"
    assert verify_coloring(g, c)


def test_node_bounds_in_trace():
    g = random_graph(np.random.default_rng(8), 10, 0.4)
    _, rep = bbq_mis(g, ExactSampler(), BBConfig(**UNBOUNDED))
    root = rep.trace[0]
    b = bounds_report(g)
    assert root["id"] == 0 and root["parent"] is None and root["depth"] == 0
    assert (root["lb"], root["ub"], root["priority"]) == (b.combined_lb, b.combined_ub, -b.combined_ub * g.m)
    for ev in rep.trace:
        assert set(ev) >= {"id", "parent", "depth", "priority", "lb", "ub", "action"}
    json.dumps(rep.to_dict())


def test_explored_in_priority_order():
    g = random_graph(np.random.default_rng(21), 11, 0.45)
    _, rep = bbq_mis(g, ExactSampler(), BBConfig(**UNBOUNDED))
    explored = [e for e in rep.trace if e["action"] == "explored"]
    assert explored[0]["id"] == 0
    assert rep.nodes_explored == len(explored)


def test_unfeasible_candidates_counted():
    class Mixed:
        name = "mixed"

        def sample(self, g, shots, seed):
            h = ExactSampler().sample(g, 200, seed)
            counts = dict(h.counts)
            counts[(1 << g.n) - 1] = 3  # never independent
            return SampleHistogram(g.n, counts)

    g = cycle_graph(5)
    c, rep = bbq_mis(g, Mixed(), BBConfig(**UNBOUNDED))
    assert c.k == 3 and rep.nodes_pruned["unfeasible"] == rep.nodes_explored


def test_junk_sampler_returns_worst_case():
    g = cycle_graph(6)
    c, rep = bbq_mis(g, JunkSampler(), BBConfig(shots=5))
    assert c.k == 6 and verify_coloring(g, c) and rep.leaves == 0


@pytest.mark.parametrize("policy", ["priority", "fifo", "dfs", "gap"])
def test_policies_are_exact(policy):
    rng = np.random.default_rng(30)
    for _ in range(15):
        g = random_graph(rng, int(rng.integers(4, 11)), 0.4)
        c, _ = bbq_mis(g, ExactSampler(), BBConfig(exploration=policy, **UNBOUNDED))
        assert c.k == exact_chromatic(g)[0]


@pytest.mark.parametrize("workers", [2, 4, 8])
def test_parallel_same_k(workers):
    rng = np.random.default_rng(40)
    for _ in range(20):
        g = random_udg(int(rng.integers(8, 14)), 20.0, 7.5, 4.0, rng)
        serial = bbq_mis(g, ExactSampler(), BBConfig())[0]
        par = bbq_mis(g, ExactSampler(), BBConfig(workers=workers))[0]
        assert par.k == serial.k


def test_serial_deterministic():
    g = random_graph(np.random.default_rng(2), 12, 0.4)
    a = bbq_mis(g, RandomGreedySampler(), BBConfig(shots=40, seed=3))[1].to_dict()
    b = bbq_mis(g, RandomGreedySampler(), BBConfig(shots=40, seed=3))[1].to_dict()
    a.pop("wall_time"), b.pop("wall_time")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


@given(graphs(min_n=1, max_n=10), st.integers(0, 100))
def test_pruning_is_lossless(g, seed):
    base = dict(seed=seed, **UNBOUNDED)
    c, rep = bbq_mis(g, ExactSampler(), BBConfig(**base))
    c0, rep0 = bbq_mis(g, ExactSampler(), BBConfig(prune_bound=False, prune_redundancy=False, **base))
    assert c0.k == c.k
    assert rep0.nodes_explored >= rep.nodes_explored


def test_first_leaf_not_worse_than_greedy_small():
    # the triangle closes at the root without any leaf, so it is left out
    for g in (cycle_graph(5), path_graph(5), cycle_graph(7), Graph([0b110, 0b101, 0b011, 0])):
        _, rep = bbq_mis(g, ExactSampler())
        assert rep.first_leaf_k <= greedy_it_mis(g, ExactSampler(), None, 0)[0].k


def test_first_leaf_can_exceed_greedy():
    # the -ub*|E| priority dives into small subgraphs first, so the first leaf
    # is not always the greedy path; this documents a known counterexample
    rng = np.random.default_rng(32)
    g = gnp_graph(int(rng.integers(4, 13)), 0.4, rng)
    _, rep = bbq_mis(g, ExactSampler(), BBConfig(seed=32))
    greedy_k = greedy_it_mis(g, ExactSampler(), None, 32)[0].k
    assert rep.first_leaf_k == greedy_k + 1
    assert rep.k == greedy_k == exact_chromatic(g)[0]


def test_first_leaf_mostly_matches_greedy():
    rng = np.random.default_rng(0)
    worse = total = 0
    for i in range(100):
        g = random_udg(int(rng.integers(6, 16)), 24.0, 7.5, 4.0, rng)
        _, rep = bbq_mis(g, ExactSampler(), BBConfig(seed=i))
        worse += rep.first_leaf_k > greedy_it_mis(g, ExactSampler(), None, i)[0].k
        total += 1
    assert worse <= 0.05 * total
