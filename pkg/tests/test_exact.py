import networkx as nx
import numpy as np
import pytest
from hypothesis import given

import brute
from conftest import random_graph, small_graphs
from sublinmatch.errors import SizeCapExceeded
from sublinmatch.exact import (count_disjoint_short_aug_paths, gmm_reference, greedy_maximal,
                               is_matching, max_matching_exact, static_approx_matching)
from sublinmatch.generators import planted_aug_paths
from sublinmatch.graph import EdgePermutation, QueryGraph

P5 = QueryGraph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])


class FixedRanks:
    def __init__(self, order):
        self.order = {tuple(sorted(e)): i for i, e in enumerate(order)}

    def rank(self, u, v):
        a, b = min(u, v), max(u, v)
        return (self.order[(a, b)], a, b)


def test_small_exact_values(triangle, petersen):
    assert max_matching_exact(triangle).size == 1
    assert max_matching_exact(P5).size == 2
    # frozen from brute-force enumeration over all matchings of the Petersen graph
    assert max_matching_exact(petersen).size == 5
    assert brute.mu(petersen.edge_list()) == 5


def test_size_cap():
    with pytest.raises(SizeCapExceeded):
        max_matching_exact(QueryGraph(10), cap=5)


def test_gmm_reference_examples(triangle):
    assert gmm_reference(QueryGraph(2, [(0, 1)]), EdgePermutation(0)) == [(0, 1)]
    ranks = FixedRanks([(0, 1), (1, 2), (0, 2)])
    assert gmm_reference(triangle, ranks) == [(0, 1)]


@given(small_graphs(max_n=10))
def test_exact_agrees_with_enumeration(g):
    assert max_matching_exact(g).size == brute.mu(g.edge_list())


@given(small_graphs(max_n=9))
def test_gmm_reference_is_rank_greedy(g):
    pi = EdgePermutation(3)
    got = set(gmm_reference(g, pi))
    assert got == brute.greedy_by_rank(g.edge_list(), pi.rank)
    used = {x for e in got for x in e}
    assert all(u in used or v in used for u, v in g.edge_list())


def test_exact_agrees_with_networkx():
    for seed in range(60):
        n = 20 + seed % 40
        g = random_graph(n, [0.05, 0.1, 0.3][seed % 3], seed)
        ref = nx.Graph()
        ref.add_nodes_from(range(n))
        ref.add_edges_from(g.edge_list())
        want = len(nx.max_weight_matching(ref, maxcardinality=True))
        got = max_matching_exact(g)
        assert got.size == want
        assert is_matching(got.edges, g)


def test_bipartite_fast_path_matches_blossom():
    rng = np.random.default_rng(4)
    for _ in range(20):
        s = 15
        edges = [(a, s + b) for a in range(s) for b in range(s) if rng.random() < 0.15]
        g = QueryGraph(2 * s, edges)
        mate = greedy_maximal(2 * s, edges)
        from sublinmatch.exact import _Blossom, adjacency_lists
        solver = _Blossom(2 * s, adjacency_lists(2 * s, edges), mate)
        for r in range(2 * s):
            if mate[r] == -1:
                solver.search(r)
        assert sum(1 for v, u in enumerate(mate) if u > v) == max_matching_exact(g).size


def test_static_approx_examples():
    assert len(static_approx_matching(P5, 0.3)) == 2
    g = random_graph(40, 0.1, 1)
    assert len(static_approx_matching(g, 1.0)) >= max_matching_exact(g).size / 2


def test_static_approx_ratio_on_random_graphs():
    for seed in range(50):
        g = random_graph(64, 0.05, seed)
        for eps in (0.5, 0.25):
            got = static_approx_matching(g, eps)
            assert is_matching(got, g)
            mu = max_matching_exact(g).size
            assert mu / (1 + eps) <= len(got) <= mu


def test_aug_path_counter_examples():
    g = QueryGraph(10, [(2 * i, 2 * i + 1) for i in range(5)])
    assert count_disjoint_short_aug_paths(g, [], 0) == 5
    assert count_disjoint_short_aug_paths(g, max_matching_exact(g), 0) == 0
    for seed in range(5):
        g, M = planted_aug_paths(60, 1, 9, p=0.0, seed=seed)
        assert count_disjoint_short_aug_paths(g, M, 1) == 9
        assert count_disjoint_short_aug_paths(g, max_matching_exact(g), 1) == 0


def test_aug_path_counter_against_enumeration():
    rng = np.random.default_rng(0)
    for _ in range(30):
        n = 8
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.3]
        M = [tuple(sorted(e)) for e in brute.maximal_matchings(edges)[0]] if edges else []
        g = QueryGraph(n, edges)
        for k in (0, 1):
            paths = brute.short_aug_paths(n, edges, M, 2 * k + 1)
            best = brute.max_disjoint(paths)
            got = count_disjoint_short_aug_paths(g, M, k)
            assert got <= best
            assert (got == 0) == (best == 0)
