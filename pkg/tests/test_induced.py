import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import exhaust, random_graph, small_graphs
from sublinmatch.errors import InvalidParameter
from sublinmatch.exact import is_matching, max_matching_exact
from sublinmatch.generators import disjoint_edges, planted_perfect_bipartite
from sublinmatch.graph import Membership, QueryGraph
from sublinmatch.induced import (EXPLICIT, IMPLICIT, InducedMatchOracle, PrepStats, _tri_decode,
                                 estimate_mu1, estimate_mu2, greedy_scan, prep_params, preprocess,
                                 removal_set, sample_aprime)
from sublinmatch.lca import EmptyOracle


def test_prep_params_literal_constants():
    P = prep_params(10**4, 0.25, 0.2, "paper")
    assert P.k == 10
    assert P.T == 2500
    assert P.delta_out == pytest.approx(3.2e-12)
    assert prep_params(10**4, 0.25, 1, "paper").delta_out == pytest.approx(1e-8)


@pytest.mark.parametrize("eps,delta", [(0.6, 0.2), (0.5, 0.2), (0, 0.2), (0.25, 0), (0.25, 1.5)])
def test_prep_params_rejects(eps, delta):
    with pytest.raises(InvalidParameter):
        prep_params(100, eps, delta)


def test_prep_params_accepts_tiny_fraction():
    P = prep_params(100, Fraction(1, 10**50), 0.25)
    assert P.k == 1


def test_tri_decode_is_a_bijection():
    t = np.arange(45)
    i, j = _tri_decode(t)
    pairs = list(zip(i.tolist(), j.tolist()))
    assert sorted(pairs) == [(a, b) for a in range(10) for b in range(a + 1, 10)]
    assert len(set(pairs)) == 45


def test_greedy_scan_order_matters():
    us, vs = np.array([0, 1, 2]), np.array([1, 2, 3])
    assert greedy_scan(4, us, vs) == [(0, 1), (2, 3)]
    assert greedy_scan(4, us[1:], vs[1:]) == [(1, 2)]


def test_estimators_trivial_cases():
    rng = np.random.default_rng(0)
    mem = Membership.everything(10)
    assert estimate_mu1([], mem, 100, 0.1, 10, rng) == pytest.approx(-0.5)
    assert estimate_mu2(EmptyOracle(10), np.arange(10), 100, 0.1, 10, rng) == pytest.approx(-0.5)
    assert estimate_mu2(None, np.zeros(0, np.int64), 100, 0.1, 10, rng) == pytest.approx(-0.5)
    # all edges inside A: the estimate is exact
    M = [(0, 1), (2, 3), (4, 5)]
    assert estimate_mu1(M, mem, 50, 0.1, 10, rng) == pytest.approx(3 - 0.5)
    none = Membership.of_set([], 10)
    assert estimate_mu1(M, none, 50, 0.1, 10, rng) == pytest.approx(-0.5)


def test_removal_set_examples():
    vp = np.ones(5, dtype=bool)
    sampled = np.zeros(5, dtype=bool)
    sampled[[1, 2]] = True
    gbar = [(0, 1), (0, 2), (0, 3)]
    assert removal_set(gbar, sampled, 2, vp).tolist() == [0]
    assert removal_set(gbar, sampled, 1, vp).tolist() == [0]
    assert removal_set(gbar, sampled, 3, vp).tolist() == []
    assert removal_set([], sampled, 0, vp).tolist() == [0, 1, 2, 3, 4]
    vp[0] = False
    assert removal_set(gbar, sampled, 1, vp).tolist() == []


def test_sample_aprime_stays_in_a_and_vprime():
    rng = np.random.default_rng(1)
    vp = np.ones(100, dtype=bool)
    vp[:50] = False
    mem = Membership.of_set(range(0, 100, 2), 100)
    got = sample_aprime(mem, vp, 30, 50, rng)
    assert got.any()
    assert all(v >= 50 and v % 2 == 0 for v in np.flatnonzero(got))
    empty = Membership.of_set([], 100)
    assert not sample_aprime(empty, vp, 30, 5, rng).any()


def test_preprocess_perfect_matching_succeeds():
    g = disjoint_edges(512)
    wins = 0
    for seed in range(20):
        st_ = preprocess(g, Membership.everything(512, g), 0.25, 0.25, np.random.default_rng(seed))
        if st_ is None:
            continue
        M = exhaust(InducedMatchOracle(st_), 512)
        assert is_matching(M, g)
        wins += len(M) >= st_.params.delta_out * 512
    assert wins >= 18


def test_preprocess_respects_membership():
    g = planted_perfect_bipartite(256, 0.02, seed=3)
    rng = np.random.default_rng(4)
    A = np.flatnonzero(rng.random(256) < 0.7)
    mem = Membership.of_set(A.tolist(), 256, g)
    mask = np.zeros(256, dtype=bool)
    mask[A] = True
    sub = g.induced(mask)
    for seed in range(5):
        stats = PrepStats()
        st_ = preprocess(g, mem, 0.25, 0.25, np.random.default_rng(seed), stats=stats)
        assert stats.rounds >= 1 and stats.probes > 0
        if st_ is None:
            continue
        assert st_.case in (EXPLICIT, IMPLICIT)
        M = exhaust(InducedMatchOracle(st_), 256)
        assert is_matching(M, sub)


def test_preprocess_empty_membership_fails():
    g = random_graph(64, 0.2, 0)
    st_ = preprocess(g, Membership.of_set([], 64, g), 0.25, 0.25, np.random.default_rng(0))
    assert st_ is None


@given(small_graphs(max_n=16), st.integers(0, 2**16), st.floats(0.2, 1.0))
def test_answers_form_a_matching_of_the_induced_graph(g, seed, frac):
    rng = np.random.default_rng(seed)
    mask = rng.random(g.n) < frac
    mem = Membership.of_mask(mask, g)
    st_ = preprocess(g, mem, 0.25, 0.25, rng)
    if st_ is None:
        return
    M = exhaust(InducedMatchOracle(st_), g.n)
    sub = g.induced(mask)
    assert is_matching(M, sub)
    assert len(M) <= max_matching_exact(sub).size


def test_preprocess_on_empty_vertex_set():
    g = QueryGraph(0)
    assert preprocess(g, Membership.everything(0, g), 0.25, 0.25, np.random.default_rng(0)) is None
