import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from sublinmatch.graph import QueryGraph

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("dev", max_examples=10, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def small_graphs(draw, min_n=0, max_n=12):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return QueryGraph(n, [p for p, keep in zip(pairs, mask) if keep])


def random_graph(n, p, seed):
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.random((n, n)) < p, 1)
    return QueryGraph.from_matrix(upper | upper.T)


def exhaust(handle, n):
    """Edges reported by a match handle, after checking pairwise consistency."""
    out = set()
    for v in range(n):
        e = handle.query(v)
        if e is None:
            continue
        assert v in e, (v, e)
        u = e[0] if e[1] == v else e[1]
        assert handle.query(u) == e, (v, u, e)
        out.add(tuple(sorted(e)))
    return out


@pytest.fixture
def triangle():
    return QueryGraph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return QueryGraph(10, outer + spokes + inner)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
