"""Local oracle for the randomized greedy maximal matching.

Vertex and edge oracles recurse over lower-ranked incident edges. A query is
cut off once it needs more than ``ell`` distinct edge-oracle evaluations, in
which case the vertex is reported unmatched on both sides, so the answers still
describe one fixed matching.
"""

from __future__ import annotations

import bisect
import math
from typing import Optional

import numpy as np

from .config import DESK, Preset, get_preset
from .errors import BudgetExceeded, NoPermutationAccepted
from .graph import EdgePermutation, Membership, ProbeBudget

Edge = tuple[int, int]


class _OverBudget:
    def __repr__(self) -> str:
        return "BudgetExceeded"

    def __bool__(self) -> bool:
        return False


OVER_BUDGET = _OverBudget()


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class InducedView:
    """G[A] seen through adjacency probes plus an A-membership oracle.

    ``host`` is an optional cheap vertex mask for the host graph (the
    degree bound ``delta`` refers to the host); membership is only asked
    about host neighbors.
    """

    def __init__(self, graph, membership: Membership | None = None,
                 host: np.ndarray | None = None, delta: float | None = None):
        self.graph = graph
        self.n = graph.n
        self.membership = membership
        self.host = None if host is None else np.asarray(host, dtype=bool)
        self.delta = delta if delta is not None else max(self.n - 1, 0)
        self._rows: dict[int, list[int]] = {}

    def contains(self, v: int) -> bool:
        if self.host is not None and not self.host[v]:
            return False
        return self.membership is None or self.membership(v)

    def neighbors(self, v: int) -> list[int]:
        got = self._rows.get(v)
        if got is None:
            row = self.graph.row(v)
            if self.host is not None:
                row = row[self.host[row]]
            if self.membership is not None:
                got = [int(u) for u in row if self.membership(int(u))]
            else:
                got = row.tolist()
            self._rows[v] = got
        return got

    def sample_vertices(self, rng: np.random.Generator, r: int, attempts: int) -> np.ndarray | None:
        """r uniform vertices of the view by rejection, or None if some sample
        misses on all of its attempts."""
        if self.n == 0:
            return None

        def member(c):
            ok = np.ones(c.size, dtype=bool) if self.host is None else self.host[c]
            if self.membership is not None:
                sel = np.flatnonzero(ok)
                ok[sel] = self.membership.many(c[sel])
            return ok

        return rejection_sample(rng, np.arange(self.n), member, r, attempts)


def rejection_sample(rng: np.random.Generator, pool: np.ndarray, member, r: int,
                     attempts: int, chunk: int = 4096) -> np.ndarray | None:
    """Draw from pool until r members are found; None once a run of
    ``attempts`` consecutive draws misses."""
    if pool.size == 0 or attempts <= 0:
        return None if r > 0 else np.zeros(0, dtype=np.int64)
    out: list[int] = []
    gap = 0
    while len(out) < r:
        c = pool[rng.integers(0, pool.size, size=min(chunk, max(64, 2 * r * 4)))]
        hits = np.flatnonzero(member(c))
        prev = -1
        for p in hits.tolist():
            gap += p - prev - 1
            if gap >= attempts:
                return None
            out.append(int(c[p]))
            gap = 0
            prev = p
            if len(out) == r:
                break
        else:
            gap += c.size - prev - 1
            if gap >= attempts:
                return None
    return np.asarray(out, dtype=np.int64)


class EmptyOracle:
    """Oracle for the empty matching."""

    n: int

    def __init__(self, n: int):
        self.n = n

    def query(self, v: int) -> Optional[Edge]:
        return None

    query_match = query


class GmmOracle:
    def __init__(self, view: InducedView, perm: EdgePermutation, ell: float,
                 dbar: float = 0.0, eps: float = 1.0):
        self.view = view
        self.n = view.n
        self.perm = perm
        self.ell = ell
        self.dbar = dbar
        self.eps = eps
        self._inc: dict[int, tuple[list, list[int]]] = {}
        self._answers: dict[int, Optional[Edge]] = {}
        self.last_evaluations = 0
        self.evaluations = 0

    def incident(self, v: int) -> tuple[list, list[int]]:
        """Neighbors of v sorted by rank of the connecting edge."""
        got = self._inc.get(v)
        if got is None:
            nb = self.view.neighbors(v)
            if nb:
                arr = np.asarray(nb, dtype=np.int64)
                h = self.perm.hashes(np.full(arr.size, v), arr)
                lo = np.minimum(arr, v)
                hi = np.maximum(arr, v)
                order = np.lexsort((hi, lo, h))
                ranks = list(zip(h[order].tolist(), lo[order].tolist(), hi[order].tolist()))
                got = (ranks, arr[order].tolist())
            else:
                got = ([], [])
            self._inc[v] = got
        return got

    def eo(self, e: Edge, u: int, memo: dict, budget: ProbeBudget) -> bool:
        """Is e in the greedy matching, deciding via lower edges at endpoint u?

        Iterative form of the recursion; each new (edge, endpoint) pair is one
        evaluation charged to ``budget``.
        """
        key = (e, u)
        if key in memo:
            return memo[key]
        budget.charge(1)
        stack = [[key, u, self._lower(e, u), 0]]
        result = None
        while stack:
            frame = stack[-1]
            if result is not None:
                if result:
                    stack.pop()
                    memo[frame[0]] = False
                    result = False
                    continue
                frame[3] += 1
                result = None
            ranks_w = frame[2]
            if frame[3] == len(ranks_w):
                stack.pop()
                memo[frame[0]] = True
                result = True
                continue
            w = ranks_w[frame[3]]
            ei = _edge(frame[1], w)
            k2 = (ei, w)
            if k2 in memo:
                result = memo[k2]
                continue
            budget.charge(1)
            stack.append([k2, w, self._lower(ei, w), 0])
        return result

    def _lower(self, e: Edge, u: int) -> list[int]:
        """Other endpoints of edges at u ranked below e."""
        ranks, nbrs = self.incident(u)
        cut = bisect.bisect_left(ranks, self.perm.rank(*e))
        return nbrs[:cut]

    def vo(self, v: int, budget: ProbeBudget | None = None):
        if budget is None:
            budget = ProbeBudget(self.ell)
        start = budget.used
        memo: dict = {}
        try:
            _, nbrs = self.incident(v)
            for u in nbrs:
                e = _edge(v, u)
                if self.eo(e, u, memo, budget):
                    return e
            return None
        except BudgetExceeded:
            return OVER_BUDGET
        finally:
            self.last_evaluations = budget.used - start
            self.evaluations += self.last_evaluations

    def recursion_count(self, v: int, cap: float = math.inf) -> float:
        """T(v, pi): distinct edge-oracle evaluations made by vo(v); inf past cap."""
        out = self.vo(v, ProbeBudget(cap))
        return math.inf if out is OVER_BUDGET else self.last_evaluations

    def query_match(self, v: int) -> Optional[Edge]:
        if v in self._answers:
            return self._answers[v]
        ans = None
        if self.view.contains(v):
            e = self.vo(v)
            if e:
                other = e[0] if e[1] == v else e[1]
                if self.vo(other) == e:
                    ans = e
        self._answers[v] = ans
        return ans

    query = query_match


def recursion_threshold(n: int, dbar: float, eps: float, preset: Preset = DESK) -> float:
    alpha = max(dbar, 0.0) * preset.log(n)
    return math.ceil(preset.lca.ell_mult * alpha / eps)


def test_perm(view: InducedView, perm: EdgePermutation, ell: float, eps: float,
              rng: np.random.Generator, preset: Preset = DESK) -> bool | None:
    """Accept iff the sampled fraction of over-budget vertices is at most 3eps/4.

    Returns None when vertex sampling fails (the view has almost no vertices).
    """
    cfg = preset.lca
    n = view.n
    r = max(1, math.ceil(cfg.testperm_factor * preset.log(n) / eps))
    if cfg.testperm_cap is not None:
        r = min(r, cfg.testperm_cap)
    attempts = max(1, math.ceil(cfg.sample_attempt_factor * max(preset.log(n), 1.0) / eps))
    probe = GmmOracle(view, perm, ell)
    sample = view.sample_vertices(rng, r, attempts)
    if sample is None:
        return None
    uniq, counts = np.unique(sample, return_counts=True)
    over = sum(int(c) for v, c in zip(uniq.tolist(), counts.tolist())
               if probe.vo(v) is OVER_BUDGET)
    return over / r <= 0.75 * eps


test_perm.__test__ = False   # not a pytest test


def _candidates(n: int, preset: Preset) -> int:
    return max(1, math.ceil(preset.lca.perm_factor * max(math.log2(max(n, 2)), 1.0)))


def _build(view: InducedView, dbar: float, eps: float, rng: np.random.Generator,
           preset: Preset, ell: float | None, trivial_on_miss: bool):
    n = view.n
    if ell is None:
        ell = recursion_threshold(n, dbar, eps, preset)
    for _ in range(_candidates(n, preset)):
        perm = EdgePermutation(int(rng.integers(0, 2**63)))
        verdict = test_perm(view, perm, ell, eps, rng, preset)
        if verdict is None:
            if trivial_on_miss:
                return EmptyOracle(n)
            verdict = True
        if verdict:
            oracle = GmmOracle(view, perm, ell, dbar, eps)
            return oracle
    raise NoPermutationAccepted(f"no permutation accepted (n={n}, dbar={dbar}, eps={eps})")


def build_gmm_oracle(g, dbar: float, eps: float, rng: np.random.Generator,
                     preset: Preset | str = DESK, ell: float | None = None) -> GmmOracle:
    preset = get_preset(preset)
    return _build(InducedView(g), dbar, eps, rng, preset, ell, trivial_on_miss=False)


def build_induced_lowdeg_oracle(view: InducedView, eps: float, rng: np.random.Generator,
                                preset: Preset | str = DESK, ell: float | None = None):
    """GMM oracle over G[A]; degrades to the empty matching when A is tiny or the
    permutation test never passes (then the low-degree premise failed)."""
    preset = get_preset(preset)
    try:
        return _build(view, view.delta, eps, rng, preset, ell, trivial_on_miss=True)
    except NoPermutationAccepted:
        return EmptyOracle(view.n)
