import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.stats import binom

from bbqmis.graph import complete_graph, cycle_graph, edgeless_graph, induced_remove, path_graph
from bbqmis.sampling import (DEFAULT_SHOTS, ExactSampler, RandomGreedySampler, SampleHistogram, derive_seed,
                             enumerate_mis, exact_sampler, extract_candidates, random_greedy_sampler)

from conftest import graphs
from oracles import brute_mis


def test_enumerate_examples():
    assert enumerate_mis(complete_graph(3)) == [1, 2, 4]
    assert enumerate_mis(path_graph(3)) == [0b101, 0b010]
    c5 = enumerate_mis(cycle_graph(5))
    assert sorted(c5) == sorted(brute_mis(cycle_graph(5)))
    assert {frozenset(i for i in range(5) if m >> i & 1) for m in c5} == \
        {frozenset(p) for p in [(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)]}


def test_enumerate_returns_labels():
    sub = induced_remove(path_graph(4), 0b0001)  # labels 1,2,3 forming a path
    assert sorted(enumerate_mis(sub)) == sorted([0b1010, 0b0100])


@given(graphs(max_n=10))
def test_enumerate_matches_brute(forced_backend, g):
    assert sorted(enumerate_mis(g)) == brute_mis(g)


def test_exact_sampler_path_weights():
    h = exact_sampler(path_graph(3), 30, 7)
    assert set(h.counts) == {0b101, 0b010} and h.shots == 30
    # one guaranteed shot each, remaining 28 split 2:1
    assert binom(28, 2 / 3).ppf(0.0005) <= h.counts[0b101] - 1 <= binom(28, 2 / 3).ppf(0.9995)
    assert h.to_dict()["entries"].keys() == {"101", "010"}


def test_exact_sampler_small_cases():
    k1 = edgeless_graph(1)
    assert exact_sampler(k1, 17, 0).counts == {1: 17}
    h = exact_sampler(complete_graph(3), 3, 0)
    assert set(h.counts) <= {1, 2, 4} and h.shots == 3
    assert exact_sampler(path_graph(3), None, 0).shots == DEFAULT_SHOTS
    with pytest.raises(ValueError):
        exact_sampler(path_graph(3), 0, 0)


def test_exact_sampler_uniform_weighting():
    h = ExactSampler("uniform").sample(path_graph(3), 3000, 1)
    assert abs(h.counts[0b101] - h.counts[0b010]) < 250
    with pytest.raises(ValueError):
        ExactSampler("bogus")


def test_random_greedy_examples():
    assert random_greedy_sampler(edgeless_graph(4), 25, 3).counts == {0b1111: 25}
    h = random_greedy_sampler(cycle_graph(5), 1000, 9)
    assert set(h.counts) <= set(enumerate_mis(cycle_graph(5)))
    assert h.shots == 1000


@given(graphs(min_n=1, max_n=10), st.integers(1, 200), st.integers(0, 2**40))
def test_random_greedy_only_maximal(g, shots, seed):
    h = random_greedy_sampler(g, shots, seed)
    assert set(h.counts) <= set(brute_mis(g))
    assert h.shots == shots


@given(graphs(min_n=1, max_n=9), st.integers(0, 2**40))
def test_exact_sampler_candidates_subset(g, seed):
    sets = enumerate_mis(g)
    few = extract_candidates(exact_sampler(g, 3, seed), g)
    assert set(few) <= set(sets) and len(few) == len(set(few))
    many = extract_candidates(exact_sampler(g, len(sets) + 50, seed), g)
    assert sorted(many) == sorted(sets)


@pytest.mark.parametrize("sampler", [ExactSampler(), RandomGreedySampler()])
def test_samplers_deterministic(sampler):
    g = cycle_graph(7)
    assert sampler.sample(g, 200, 42) == sampler.sample(g, 200, 42)
    assert sampler.sample(g, 200, 42).counts != sampler.sample(g, 200, 43).counts


def test_extract_candidates_examples():
    p3 = path_graph(3)
    h = SampleHistogram(3, {0b101: 20, 0b010: 10, 0b011: 5})
    assert extract_candidates(h, p3) == [0b101, 0b010]
    assert extract_candidates(SampleHistogram(3, {0b001: 50}), p3) == []


def test_extract_candidates_order_and_labels():
    sub = induced_remove(path_graph(4), 0b0001)  # local 0,1,2 are labels 1,2,3
    h = SampleHistogram(3, {0b010: 5, 0b101: 5})
    assert extract_candidates(h, sub) == [0b0100, 0b1010]  # tie broken by mask
    with pytest.raises(ValueError):
        extract_candidates(SampleHistogram(2, {1: 1}), sub)


def test_histogram_json_round_trip():
    h = SampleHistogram(4, {0b0001: 3, 0b1000: 5}, "exact", 11)
    d = h.to_dict()
    assert d == {"shots": 8, "backend": "exact", "seed": 11, "entries": {"1000": 5, "0001": 3}}
    back = SampleHistogram.from_dict(d)
    assert back.counts == h.counts and back.n == 4
    with pytest.raises(ValueError):
        SampleHistogram.from_dict({**d, "shots": 9})


def test_histogram_validation():
    with pytest.raises(ValueError):
        SampleHistogram(2, {0b100: 1})
    with pytest.raises(ValueError):
        SampleHistogram(2, {0b01: 0})


def test_derive_seed_independent_streams():
    assert derive_seed(1, 2, 3) == derive_seed(1, 2, 3)
    seeds = {derive_seed(0, 1, i) for i in range(1000)}
    assert len(seeds) == 1000
    assert derive_seed(0, 1) != derive_seed(1, 1)
    assert 0 <= derive_seed(5, 9) < 2**63
