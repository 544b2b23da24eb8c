"""Fully dynamic matching-size maintenance.

A maximal matching gives a factor-2 coarse estimate. Phases alternate
between a dense regime (static approximate matching kept explicitly) and a
sparse regime (near-optimal oracles on random contractions of the graph,
lifted back on demand). A simple periodic-recompute baseline lives here too.
"""

from __future__ import annotations

import math
import warnings
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .config import DESK, Preset, get_preset
from .errors import BudgetUnderrun, InvalidParameter
from .exact import FREE, _edges_of, drain, max_matching_exact, static_approx_steps
from .graph import DynamicGraph, QueryGraph, UpdateStream
from .lca import EmptyOracle
from .near_optimal import estimate_size, run_near_optimal

Edge = tuple[int, int]
TYPE_I = "I"
TYPE_II = "II"


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


# -- coarse estimate ---------------------------------------------------

class CoarseEstimate:
    """Maximal matching kept under updates; its size is within a factor 2
    of the maximum matching."""

    def __init__(self, g: DynamicGraph):
        self.g = g
        self.mate = np.full(g.n, FREE, dtype=np.int64)
        self.size = 0
        self.scans = 0
        for u, v in g.base.edge_list():
            self.on_insert(u, v)

    def _match(self, u: int, v: int) -> None:
        self.mate[u], self.mate[v] = v, u
        self.size += 1

    def _rematch(self, x: int) -> None:
        self.scans += self.g.n
        row = self.g.base._adj[x]
        free = np.flatnonzero(row & (self.mate == FREE))
        free = free[free != x]
        if free.size:
            self._match(x, int(free[0]))

    def on_insert(self, u: int, v: int) -> None:
        if self.mate[u] == FREE and self.mate[v] == FREE:
            self._match(u, v)

    def on_delete(self, u: int, v: int) -> None:
        if self.mate[u] != v:
            return
        self.mate[u] = self.mate[v] = FREE
        self.size -= 1
        self._rematch(u)
        if self.mate[v] == FREE:
            self._rematch(v)

    @property
    def value(self) -> int:
        return self.size


def coarse_estimate(g: DynamicGraph) -> int:
    return CoarseEstimate(g).value


# -- contractions ------------------------------------------------------

@dataclass
class Contraction:
    guess: int
    copy: int
    phi: np.ndarray
    size: int
    mult: Optional[Counter]         # (a, b) with a < b -> parallel edges; None for the identity map

    @property
    def identity(self) -> bool:
        return self.mult is None

    def apply(self, u: int, v: int, delta: int) -> None:
        if self.mult is None:
            return
        a, b = int(self.phi[u]), int(self.phi[v])
        if a == b:
            return
        key = (a, b) if a < b else (b, a)
        c = self.mult[key] + delta
        if c:
            self.mult[key] = c
        else:
            del self.mult[key]

    def edges(self) -> list[Edge]:
        """Edges of the booleanized contracted graph (parallel edges collapsed, loops dropped)."""
        return sorted(self.mult)

    def graph(self, g: DynamicGraph | QueryGraph) -> QueryGraph:
        base = g.base if isinstance(g, DynamicGraph) else g
        if self.mult is None:
            return QueryGraph.from_matrix(base.matrix())
        return QueryGraph(self.size, self.edges())

    def graph_of_edges(self, n: int, edges) -> QueryGraph:
        if self.mult is None:
            return QueryGraph(n, edges)
        return QueryGraph(self.size, _contract(self.phi, edges))


def _contract(phi: np.ndarray, edges) -> list[Edge]:
    if not len(edges):
        return []
    e = np.asarray(edges, dtype=np.int64)
    a, b = phi[e[:, 0]], phi[e[:, 1]]
    keep = a != b
    lo, hi = np.minimum(a, b)[keep], np.maximum(a, b)[keep]
    return sorted(set(zip(lo.tolist(), hi.tolist())))


def contraction_size(i: int, eps: float, alpha: float) -> int:
    return math.ceil(8 * alpha ** (i + 1) / eps - 1e-9)


def contraction_count(n: int, eps: float, preset: Preset) -> int:
    cfg = preset.dynamic
    t = max(1, math.ceil(cfg.contr_factor * math.log(max(n, 2)) / eps ** 2))
    return t if cfg.contr_cap is None else min(t, cfg.contr_cap)


class ContractionSet:
    """Contractions for every guess alpha^i of the matching size."""

    def __init__(self, g, eps: float, rng: np.random.Generator, preset: Preset | str = DESK):
        """``g`` is a graph or an ``(n, edges)`` pair."""
        preset = get_preset(preset)
        n, edges = _edges_of(g.base if isinstance(g, DynamicGraph) else g)
        self.n = n
        self.eps = eps
        self.alpha = preset.dynamic.alpha
        self.guesses = max(1, math.ceil(math.log(max(n, 2), self.alpha) - 1e-9)) + 1
        self.T = contraction_count(n, eps, preset)
        self.by_guess: list[list[Contraction]] = []
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        for i in range(self.guesses):
            size = contraction_size(i, eps, self.alpha)
            if size >= n:
                # Every larger guess would also map injectively; one identity
                # map stands in for all of their copies.
                self.by_guess.append([Contraction(i, 0, np.arange(n), n, None)])
                continue
            group = []
            for j in range(self.T):
                phi = rng.integers(0, size, size=n)
                a, b = phi[e[:, 0]], phi[e[:, 1]]
                keep = a != b
                pairs = zip(np.minimum(a, b)[keep].tolist(), np.maximum(a, b)[keep].tolist())
                group.append(Contraction(i, j, phi, size, Counter(pairs)))
            self.by_guess.append(group)

    def all(self) -> list[Contraction]:
        return [c for group in self.by_guess for c in group]

    def apply(self, op: str, u: int, v: int) -> None:
        delta = 1 if op == "+" else -1
        for group in self.by_guess:
            for c in group:
                c.apply(u, v, delta)

    def accurate_index(self, mu_hat: float) -> int:
        """Smallest guess whose next power exceeds the coarse estimate."""
        i = 0
        while i < self.guesses - 1 and self.alpha ** (i + 1) <= mu_hat:
            i += 1
        return i

    def accurate(self, mu_hat: float) -> list[Contraction]:
        return self.by_guess[self.accurate_index(mu_hat)]


def maintain_contractions(cs: ContractionSet, update) -> None:
    op, u, v = update
    cs.apply(op, u, v)


# -- phases ------------------------------------------------------------

def type1_length(m_init: int, eps: float, eps0: float) -> int:
    return max(1, math.ceil(eps * m_init ** (0.5 + eps0) - 1e-9))


def type2_length(mu_hat_init: float, eps: float) -> int:
    return max(1, math.ceil(eps * mu_hat_init - 1e-9))


@dataclass
class Published:
    """Output of one phase build: the estimate and a match handle."""

    kind: str
    mu_star: float
    length: int
    m_init: int
    mu_hat_init: int
    mate: dict = field(default_factory=dict)
    handle: object = None
    contraction: Optional[Contraction] = None
    lifted: dict = field(default_factory=dict)
    dead: set = field(default_factory=set)
    estimates: list = field(default_factory=list)


@dataclass
class Snapshot:
    n: int
    edges: list
    m: int
    mu_hat: int


class DynamicMatcher:
    """Publishes a matching-size estimate and a match oracle under updates.

    In deamortized mode (``budget`` set), each phase's output is the result
    of the build started two phases earlier, computed in the background at
    ``budget`` work units per update.
    """

    def __init__(self, n: int, eps: float, seed: int = 0, preset: Preset | str = DESK,
                 budget: float | None = None, initial=()):
        if not (0 < eps < 1):
            raise InvalidParameter("eps must lie in (0, 1)")
        self.preset = get_preset(preset)
        self.eps = eps
        self.eps0 = self.preset.dynamic.eps0_ratio * eps
        self.gamma = eps ** self.preset.dynamic.gamma_power
        self.seed = seed
        self.g = DynamicGraph(n)
        for u, v in initial:
            self.g.insert(u, v)
        self.coarse = CoarseEstimate(self.g)
        self.contractions = ContractionSet(self.g, eps, np.random.default_rng([seed, 0]),
                                           self.preset)
        self.budget = budget
        self.phase = 0
        self.updates = 0
        self.work = 0                  # probes and scans charged by this maintainer
        self.step_log: list[int] = []  # per-update background work (deamortized)
        self.max_step = 0
        self.rebuilds = 0
        self._job = None
        self._snapshots: dict[int, Snapshot] = {}
        self.published = self._finish(self._build(self._snapshot(), live=True))
        self.remaining = self.published.length
        self.phase = 1
        if budget is not None:
            self._snapshots[1] = self._snapshot()

    # building
    def _snapshot(self) -> Snapshot:
        return Snapshot(self.g.n, self.g.base.edge_list(), self.g.m, self.coarse.value)

    def _rng(self) -> np.random.Generator:
        self.rebuilds += 1
        return np.random.default_rng([self.seed, 1, self.rebuilds])

    def _build(self, snap: Snapshot, live: bool = False):
        """Step generator producing a Published for the snapshot."""
        rng = self._rng()
        n, eps = snap.n, self.eps
        if snap.m > 0 and snap.mu_hat >= snap.m ** (0.5 + self.eps0):
            self.work += n * (n - 1) // 2
            M = yield from static_approx_steps((n, snap.edges), eps)
            mate = {}
            for u, v in M:
                mate[u], mate[v] = v, u
            return Published(TYPE_I, len(M), type1_length(snap.m, eps, self.eps0),
                             snap.m, snap.mu_hat, mate=mate)
        best = Published(TYPE_II, 0, type2_length(snap.mu_hat, eps), snap.m, snap.mu_hat,
                         handle=EmptyOracle(n), contraction=None)
        for c in self.contractions.accurate(snap.mu_hat):
            H = c.graph(self.g) if live else c.graph_of_edges(n, snap.edges)
            if H.edge_count() == 0:
                best.estimates.append(0.0)
                yield 1
                continue
            handle = run_near_optimal(H, self.gamma, rng, self.preset).handle
            est = estimate_size(handle, self.gamma, H.n, rng, self.preset)
            self.work += H.probes
            best.estimates.append(est)
            if best.contraction is None or est > best.mu_star:
                best.mu_star, best.handle, best.contraction = est, handle, c
            yield max(1, H.probes)
        return best

    def _finish(self, steps) -> Published:
        return drain(steps)

    # phases
    def _next_phase(self) -> None:
        self.phase += 1
        if self.budget is None:
            self.published = self._finish(self._build(self._snapshot(), live=True))
        else:
            if self._job is not None and self._job[0] is not None:
                gen, _ = self._job
                warnings.warn(BudgetUnderrun(
                    f"phase {self.phase - 1} ended before its rebuild finished"))
                self._job = (None, self._finish(gen))
            if self._job is not None:
                self.published = self._refresh(self._job[1])
                self._job = None
            self._snapshots[self.phase] = self._snapshot()
            # during phase i (i > 2) rebuild the snapshot taken at phase i - 2
            if self.phase > 2:
                snap = self._snapshots.pop(self.phase - 2)
                self._job = (self._build(snap), None)
        self.remaining = self.published.length

    def _refresh(self, pub: Published) -> Published:
        """Drop explicit edges deleted since the snapshot was taken."""
        adj = self.g.base._adj
        for u, w in list(pub.mate.items()):
            if not adj[u, w]:
                pub.dead.update((u, w))
        return pub

    def _background(self) -> None:
        if self._job is None or self._job[0] is None:
            self.step_log.append(0)
            return
        gen = self._job[0]
        spent = 0
        while spent < self.budget:
            try:
                step = next(gen)
            except StopIteration as stop:
                self._job = (None, stop.value)
                break
            spent += step
            self.max_step = max(self.max_step, step)
        self.step_log.append(spent)

    # updates
    def update(self, op: str, u: int, v: int) -> float:
        op = "+" if op in ("+", "insert") else "-" if op in ("-", "delete") else op
        self.g.apply_update(op, u, v)
        if op == "+":
            self.coarse.on_insert(u, v)
        else:
            self.coarse.on_delete(u, v)
            self._mark_deleted(u, v)
        self.contractions.apply(op, u, v)
        self.updates += 1
        if self.budget is not None:
            self._background()
        self.remaining -= 1
        if self.remaining <= 0:
            self._next_phase()
        return self.published.mu_star

    def _mark_deleted(self, u: int, v: int) -> None:
        pub = self.published
        e = _edge(u, v)
        if pub.kind == TYPE_I:
            if pub.mate.get(u) == v:
                pub.dead.update(e)
        elif e in pub.lifted.values():
            pub.dead.update(e)

    @property
    def mu_star(self) -> float:
        return self.published.mu_star

    @property
    def phase_type(self) -> str:
        return self.published.kind

    # queries
    def query(self, v: int) -> Optional[Edge]:
        pub = self.published
        if v in pub.dead:
            return None
        if pub.kind == TYPE_I:
            w = pub.mate.get(v)
            return None if w is None else _edge(v, w)
        if pub.contraction is None:
            return None
        c = pub.contraction
        a = int(c.phi[v])
        e = pub.handle.query(a)
        if e is None:
            return None
        key = _edge(*e)
        if key not in pub.lifted:
            pub.lifted[key] = self._lift(c, key)
        got = pub.lifted[key]
        if got is None or v not in got or got[0] in pub.dead:
            return None
        return got

    def _lift(self, c: Contraction, key: Edge) -> Optional[Edge]:
        """Lexicographically first G-edge between the two preimage classes."""
        xs = np.flatnonzero(c.phi == key[0])
        ys = np.flatnonzero(c.phi == key[1])
        self.work += xs.size * ys.size
        sub = self.g.base._adj[np.ix_(xs, ys)]
        i, j = np.nonzero(sub)
        if i.size == 0:
            return None
        a, b = xs[i], ys[j]
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        k = np.lexsort((hi, lo))[0]
        return int(lo[k]), int(hi[k])

    def matched_edges(self) -> list[Edge]:
        out = set()
        for v in range(self.g.n):
            e = self.query(v)
            if e is not None:
                out.add(e)
        return sorted(out)


def start_phase(matcher: DynamicMatcher) -> Published:
    matcher._next_phase()
    return matcher.published


def query_dynamic_match(matcher: DynamicMatcher, v: int) -> Optional[Edge]:
    return matcher.query(v)


# -- baseline ----------------------------------------------------------

def baseline_interval(m: int, n: int, eps: float) -> int:
    return max(1, math.ceil(eps * m / (2 * n) - 1e-9))


class Baseline:
    """Recompute a static approximate matching every ceil(eps m / 2n)
    updates and only drop deleted edges in between."""

    def __init__(self, n: int, eps: float):
        self.g = DynamicGraph(n)
        self.eps = eps
        self.mate: dict[int, int] = {}
        self.recomputes = 0
        self.work = 0
        self._recompute()

    def _recompute(self) -> None:
        n = self.g.n
        self.work += n * (n - 1) // 2
        M = drain(static_approx_steps(self.g.base, self.eps))
        self.mate = {}
        for u, v in M:
            self.mate[u], self.mate[v] = v, u
        self.recomputes += 1
        self.countdown = baseline_interval(self.g.m, n, self.eps)

    def update(self, op: str, u: int, v: int) -> list[Edge]:
        self.g.apply_update(op, u, v)
        if op in ("-", "delete") and self.mate.get(u) == v:
            del self.mate[u], self.mate[v]
        self.countdown -= 1
        if self.countdown <= 0:
            self._recompute()
        return self.matching()

    def matching(self) -> list[Edge]:
        return sorted(_edge(u, v) for u, v in self.mate.items() if u < v)

    @property
    def size(self) -> int:
        return len(self.mate) // 2


def baseline_update(state: Baseline, op: str, u: int, v: int) -> list[Edge]:
    return state.update(op, u, v)


# -- stream replay -----------------------------------------------------

CHECKPOINT_COLUMNS = ("update_index", "mu_star", "exact_mu", "probes_since_last", "phase_type")


def replay(maintainer, stream: UpdateStream, exact: bool = False,
           checkpoint_every: int | None = None) -> list[dict]:
    """Feed a stream to a DynamicMatcher or Baseline; one row per checkpoint.

    Checkpoints are the stream's "?" markers plus every ``checkpoint_every``
    updates when given.
    """
    rows = []
    last = _work(maintainer)
    idx = 0
    for item in stream.items:
        if item[0] == "?":
            hit = True
        else:
            maintainer.update(*item)
            idx += 1
            hit = bool(checkpoint_every) and idx % checkpoint_every == 0
        if hit:
            now = _work(maintainer)
            rows.append({
                "update_index": idx,
                "mu_star": _value(maintainer),
                "exact_mu": max_matching_exact(maintainer.g.base).size if exact else None,
                "probes_since_last": now - last,
                "phase_type": getattr(maintainer, "phase_type", "baseline"),
            })
            last = now
    return rows


def _work(maintainer) -> int:
    return maintainer.g.base.probes + maintainer.work


def _value(maintainer) -> float:
    if isinstance(maintainer, Baseline):
        return maintainer.size
    return maintainer.mu_star
