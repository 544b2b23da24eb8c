"""Augmenting an input matching along short augmenting paths.

Vertices are split into 2k+2 random layers. The algorithm grows a stack of
nested matchings M_0, M_2, ..., M_2k, one per even layer pair, backtracking
(and killing candidate vertices) whenever the next layer has no large
matching. A full stack yields node-disjoint augmenting paths of length 2k+1,
which the output oracle applies lazily, one query at a time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .config import DESK, Preset, get_preset
from .errors import InvalidParameter, InvariantViolation, IterationCapExceeded
from .exact import max_matching_exact
from .graph import LayeredView, Membership
from .induced import InducedMatchOracle, preprocess

Edge = tuple[int, int]
DONE = "done"
FAILURE = "failure"


def mate_of(handle, v: int) -> Optional[int]:
    e = handle.query(v)
    if e is None:
        return None
    return e[1] if e[0] == v else e[0]


# -- parameters --------------------------------------------------------

def _literal_psi(k: int, gamma: float) -> float:
    surv = gamma * (2 * k + 2) ** (-(2 * k + 2))
    first = surv / (max(2 * k, 1) * 1e8)
    remainder = surv - k * 1e8 * first
    return min(first, (remainder / 2) ** 0.2)


def psi_schedule(k: int, psi: float, preset: Preset | str = DESK) -> tuple[list[float], list[float]]:
    """(psi_i, delta_i) for i = 0..k under the preset's schedule."""
    preset = get_preset(preset)
    if preset.boost.schedule == "paper":
        lp = math.log(psi)
        psis = [_exp(5 ** (4 * i + 3) * lp - math.log(1e8)) for i in range(k + 1)]
        deltas = [_exp(5 ** (4 * i + 1) * lp) for i in range(k + 1)]
    else:
        cfg = preset.prep
        deltas = [psi / 2 ** (i + 1) for i in range(k + 1)]
        psis = [d ** cfg.out_power / cfg.out_divisor for d in deltas]
    return psis, deltas


def _exp(x: float) -> float:
    return math.exp(x) if x > -745 else 0.0


@dataclass(frozen=True)
class BoostParams:
    k: int
    gamma: float
    eps_in: Fraction
    T: int
    psi: float
    psis: tuple
    deltas: tuple

    def eps_at(self, t: int) -> Fraction:
        return self.eps_in * 9 ** t


def iteration_bound(k: int, psis, preset: Preset) -> int:
    if k == 0:
        return 2
    if any(p <= 0 for p in psis[:k]):
        raise InvalidParameter("psi schedule underflows; iteration bound is not finite")
    total = sum(1.0 / p for p in psis[:k])
    val = preset.boost.rounds_mult * (k + 1) * total
    if not math.isfinite(val) or val > 1e12:
        raise InvalidParameter("iteration bound too large to satisfy 9^T eps_in < 1/5")
    return math.ceil(val) + k + 2


def admissible_eps(T: int) -> Fraction:
    return Fraction(1, 10 * 9 ** T)


def boost_params(k: int, gamma: float, eps_in=None, preset: Preset | str = DESK,
                 psi: float | None = None) -> BoostParams:
    preset = get_preset(preset)
    if k < 0:
        raise InvalidParameter("k must be non-negative")
    if psi is None:
        psi = preset.boost.psi if preset.boost.psi is not None else _literal_psi(k, gamma)
    psis, deltas = psi_schedule(k, psi, preset)
    T = iteration_bound(k, psis, preset)
    eps_in = admissible_eps(T) if eps_in is None else Fraction(eps_in)
    if not (eps_in > 0 and eps_in * 9 ** T < Fraction(1, 5)):
        raise InvalidParameter(f"9^T * eps_in must be < 1/5 (T={T})")
    return BoostParams(k, gamma, eps_in, T, psi, tuple(psis), tuple(deltas))


# -- layers and relevance ----------------------------------------------

@dataclass(frozen=True)
class LayerAssignment:
    k: int
    seed: int
    layer: np.ndarray

    def __getitem__(self, v: int) -> int:
        return int(self.layer[v])


def assign_layers(n: int, k: int, seed: int) -> LayerAssignment:
    rng = np.random.default_rng(seed)
    return LayerAssignment(k, seed, rng.integers(0, 2 * k + 2, size=n))


def relevant(v: int, layers: LayerAssignment, match_in) -> bool:
    k = layers.k
    lv = layers[v]
    u = mate_of(match_in, v)
    if u is None:
        return lv in (0, 2 * k + 1)
    lu = layers[u]
    if lv % 2 == 1 and 1 <= lv <= 2 * k - 1:
        return lu == lv + 1
    if lv % 2 == 0 and 2 <= lv <= 2 * k:
        return lu == lv - 1
    return False


# -- largematch backends -----------------------------------------------

class ExplicitMatch:
    """Oracle over an explicitly stored matching."""

    def __init__(self, n: int, edges):
        self.n = n
        self.edges = [tuple(sorted(e)) for e in edges]
        self._mate = {}
        for u, v in self.edges:
            self._mate[u], self._mate[v] = v, u

    def query(self, v: int) -> Optional[Edge]:
        w = self._mate.get(v)
        if w is None:
            return None
        return (v, w) if v < w else (w, v)

    def __len__(self) -> int:
        return len(self.edges)


def _sublinear_largematch(view, mem, delta, eps, rng, preset):
    st = preprocess(view, mem, delta, eps, rng, preset)
    return None if st is None else InducedMatchOracle(st)


def _explicit_largematch(view, mem, delta, eps, rng, preset):
    """Template stub: maximum matching of G[S] from the exact solver."""
    n = view.n
    S = np.flatnonzero(mem.many(np.arange(n)))
    keep = np.zeros(n, dtype=bool)
    keep[S] = True
    lo = S[view._in_lo[S]]
    hi = S[view._in_hi[S]]
    adj = view.base._adj
    edges = [(int(a), int(b)) for a in lo for b in hi[adj[a, hi]]]
    M = max_matching_exact((n, edges)).edges
    cfg = get_preset(preset).prep
    floor = delta ** cfg.out_power / cfg.out_divisor * n
    if len(M) >= max(floor, 1e-12) and M:
        return ExplicitMatch(n, M)
    return None


BACKENDS = {"sublinear": _sublinear_largematch, "explicit": _explicit_largematch}


# -- the iteration chain -----------------------------------------------

@dataclass
class IterationRecord:
    t: int
    kind: str                    # forward | backtrack | failure
    level: int                   # stack(t-1)
    sigma: int                   # 2 * level + 2
    oracle: object = None        # forward: new matching; backtrack: popped one
    membership_calls: int = 0
    probes: int = 0


class Augmenter:
    """State of one Augment run: layers, active stack, and the alive chain."""

    def __init__(self, g, match_in, params: BoostParams, layers: LayerAssignment,
                 rng: np.random.Generator, preset: Preset | str = DESK,
                 backend: str = "sublinear"):
        self.g = g
        self.n = g.n
        self.match_in = match_in
        self.params = params
        self.k = params.k
        self.layers = layers
        self.rng = rng
        self.preset = get_preset(preset)
        self.largematch = BACKENDS[backend]
        self.t = 0
        self.stack: list[tuple[int, object]] = []
        self.records: list[IterationRecord] = []
        self.backtracks: list[IterationRecord] = []
        self.backtrack_count = [0] * (self.k + 1)
        self._mate: dict[int, Optional[int]] = {}
        self._alive: dict[int, tuple[int, bool]] = {}

    # oracle plumbing
    def mate_in(self, v: int) -> Optional[int]:
        if v not in self._mate:
            self._mate[v] = mate_of(self.match_in, v)
        return self._mate[v]

    def relevant(self, v: int) -> bool:
        k, lv = self.k, self.layers[v]
        u = self.mate_in(v)
        if u is None:
            return lv in (0, 2 * k + 1)
        lu = self.layers[u]
        if lv % 2 == 1 and lv <= 2 * k - 1:
            return lu == lv + 1
        if lv % 2 == 0 and 2 <= lv <= 2 * k:
            return lu == lv - 1
        return False

    def alive(self, v: int, t: int) -> bool:
        cached = self._alive.get(v)
        if cached is not None and cached[0] <= t:
            t0, val = cached
        else:
            t0, val = 0, self.relevant(v)
        if val:
            for rec in self.backtracks:
                if rec.t <= t0:
                    continue
                if rec.t > t:
                    break
                if self._killed(rec, v):
                    val = False
                    break
        if cached is None or cached[0] <= t:
            self._alive[v] = (t, val)
        return val

    def _killed(self, rec: IterationRecord, v: int) -> bool:
        """Did backtracking iteration rec kill v (given v was alive before)?"""
        i = rec.level
        lv = self.layers[v]
        if lv == 2 * i + 2:
            u = self.mate_in(v)
            return u is not None and rec.oracle.query(u) is not None
        if lv == 2 * i + 1:
            u = self.mate_in(v)
            if u is None or self.layers[u] != 2 * i + 2:
                return False
            return self.alive(u, rec.t - 1) and rec.oracle.query(v) is not None
        return False

    def candidate(self, v: int, t: int | None = None) -> bool:
        """v in C_{2i+2} for iteration t, with i = stack(t-1) (current by default)."""
        if t is None:
            t = self.t + 1
        i = len(self.stack) - 1
        if self.layers[v] != 2 * i + 2 or not self.alive(v, t - 1):
            return False
        if i == -1:
            return True
        u = self.mate_in(v)
        return u is not None and self.stack[i][1].query(u) is not None

    def target_membership(self) -> Membership:
        t = self.t + 1
        i = len(self.stack) - 1
        top = 2 * i + 3

        def fn(v: int) -> bool:
            if self.layers[v] == top:
                return self.alive(v, t - 1)
            return self.candidate(v, t)

        return Membership(fn, self.n, self.g)

    def iterate(self) -> str | None:
        """One iteration; returns DONE, FAILURE, or None to continue."""
        i = len(self.stack) - 1
        if i == self.k:
            return DONE
        t = self.t + 1
        cap = self.params.T
        if self.preset.boost.iteration_cap is not None:
            cap = min(cap, self.preset.boost.iteration_cap)
        if t > cap:
            raise IterationCapExceeded(f"iteration {t} exceeds cap {cap}")
        base = getattr(self.g, "base", self.g)
        p0, m0 = base.probes, base.membership_calls
        mem = self.target_membership()
        view = LayeredView(base, self.layers.layer, 2 * i + 2, 2 * i + 3)
        eps = 2 * self.params.eps_at(t - 1)
        oracle = self.largematch(view, mem, self.params.deltas[i + 1], eps, self.rng, self.preset)
        rec = IterationRecord(t, "forward", i, 2 * i + 2)
        self.t = t
        if oracle is not None:
            rec.oracle = oracle
            self.stack.append((t, oracle))
            out = DONE if len(self.stack) - 1 == self.k else None
        elif i == -1:
            rec.kind = "failure"
            out = FAILURE
        else:
            rec.kind = "backtrack"
            rec.oracle = self.stack[i][1]
            self.stack.pop()
            self.backtracks.append(rec)
            self.backtrack_count[i] += 1
            bound = math.ceil(1 / self.params.psis[i])
            if self.backtrack_count[i] > bound:
                raise InvariantViolation(f"{self.backtrack_count[i]} backtracks at layer {2 * i} > {bound}")
            out = None
        rec.probes = base.probes - p0
        rec.membership_calls = base.membership_calls - m0
        self.records.append(rec)
        return out

    def run(self) -> str:
        while True:
            out = self.iterate()
            if out is not None:
                return out

    def active(self) -> list[int]:
        return [t for t, _ in self.stack]


class BoostedMatch:
    """M_out = M_in with every complete layered path flipped."""

    def __init__(self, aug: Augmenter):
        self.n = aug.n
        self.k = aug.k
        self.layers = aug.layers
        self.levels = [o for _, o in aug.stack]
        self.match_in = aug.match_in
        self._mate_in = aug.mate_in
        self._cache: dict[int, Optional[Edge]] = {}
        self.queries = 0

    def trace(self, v: int) -> Optional[list[int]]:
        """The complete path v_0..v_{2k+1} through v, if v lies on one."""
        L = self.layers
        top = 2 * self.k + 1
        q0 = L[v]
        path = {q0: v}
        q = q0
        while q > 0:
            x = path[q]
            y = mate_of(self.levels[(q - 1) // 2], x) if q % 2 else self._mate_in(x)
            if y is None or L[y] != q - 1:
                return None
            path[q - 1] = y
            q -= 1
        q = q0
        while q < top:
            x = path[q]
            y = self._mate_in(x) if q % 2 else mate_of(self.levels[q // 2], x)
            if y is None or L[y] != q + 1:
                return None
            path[q + 1] = y
            q += 1
        if self._mate_in(path[0]) is not None or self._mate_in(path[top]) is not None:
            return None
        return [path[j] for j in range(top + 1)]

    def query(self, v: int) -> Optional[Edge]:
        got = self._cache.get(v, False)
        if got is not False:
            return got
        self.queries += 1
        u = self._mate_in(v)
        lv = self.layers[v]
        if u is None and lv not in (0, 2 * self.k + 1):
            ans = None
        else:
            path = self.trace(v)
            if path is None:
                ans = None if u is None else ((v, u) if v < u else (u, v))
            else:
                w = path[lv + 1] if lv % 2 == 0 else path[lv - 1]
                ans = (v, w) if v < w else (w, v)
        self._cache[v] = ans
        return ans


@dataclass
class AugmentOutcome:
    status: str
    handle: object
    augmenter: Augmenter
    eps_out: Fraction
    records: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == DONE


def augment(g, match_in, k: int, gamma: float, eps_in, rng: np.random.Generator,
            preset: Preset | str = DESK, backend: str = "sublinear",
            params: BoostParams | None = None) -> AugmentOutcome:
    preset = get_preset(preset)
    params = params or boost_params(k, gamma, eps_in, preset)
    layers = assign_layers(g.n, k, int(rng.integers(0, 2**63)))
    aug = Augmenter(g, match_in, params, layers, rng, preset, backend)
    status = aug.run()
    handle = BoostedMatch(aug) if status == DONE else None
    return AugmentOutcome(status, handle, aug, params.eps_at(aug.t), aug.records)
