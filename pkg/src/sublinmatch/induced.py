"""Large matchings inside G[A] given only adjacency probes and A-membership.

``preprocess`` either settles on an explicit matching found among sampled
pairs, or on a low-degree oracle for the residual graph, or gives up (None)
when G[A] may not contain a matching of size delta_in * n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .config import DESK, Preset, get_preset
from .errors import InvalidParameter
from .graph import LayeredView, Membership
from .lca import EmptyOracle, InducedView, build_induced_lowdeg_oracle, rejection_sample

EXPLICIT = "explicit"
IMPLICIT = "implicit"


def _ceil(x: float) -> int:
    return math.ceil(x - 1e-9 * max(1.0, abs(x)))


@dataclass(frozen=True)
class PrepParams:
    n: int
    eps: float
    delta_in: float
    p: int
    k: int
    eta: float
    T: int
    delta_out: float
    r1: int
    r2: int
    r3: int
    attempts: int
    degree_bound: float


def prep_params(n: int, eps, delta_in: float, preset: Preset | str = DESK) -> PrepParams:
    preset = get_preset(preset)
    cfg = preset.prep
    if not (0 < eps < Fraction(1, 2)):
        raise InvalidParameter(f"eps={eps} outside (0, 1/2)")
    if not (0 < delta_in <= 1):
        raise InvalidParameter(f"delta_in={delta_in} outside (0, 1]")
    e = float(eps)
    lg = max(preset.log(n), 1.0)
    k = max(1, _ceil(n ** e))
    p = max(1, _ceil(cfg.pair_factor * n ** (2 - 2 * e) * lg))
    delta_out = delta_in ** cfg.out_power / cfg.out_divisor
    T = max(1, _ceil(cfg.rounds_factor / delta_in ** 2))
    if cfg.rounds_cap is not None:
        T = min(T, cfg.rounds_cap)
    r12 = max(1, _ceil(cfg.sample_factor / delta_out ** 2 * lg))
    r3 = max(1, _ceil(cfg.r3_factor * delta_in * (n / k) * lg))
    if cfg.sample_cap is not None:
        r12 = min(r12, cfg.sample_cap)
        r3 = min(r3, cfg.sample_cap)
    return PrepParams(
        n=n, eps=e, delta_in=delta_in, p=p, k=k,
        eta=cfg.eta_factor * delta_in ** 2 * lg, T=T, delta_out=delta_out,
        r1=r12, r2=r12, r3=r3,
        attempts=max(1, _ceil(cfg.attempt_factor * lg / delta_in)),
        degree_bound=max(1.0, n ** (cfg.degree_power * e)),
    )


@dataclass
class PrepStats:
    rounds: int = 0
    groups: int = 0
    pair_probes: int = 0
    probes: int = 0
    membership_calls: int = 0
    mu1: list = field(default_factory=list)
    mu2: list = field(default_factory=list)
    removed: list = field(default_factory=list)
    residual_max_degree: list = field(default_factory=list)


@dataclass
class PrepState:
    case: str
    vprime: np.ndarray
    matching: list
    mate: dict
    membership: Membership
    params: PrepParams
    lowdeg_oracle: object = None


# -- pair sampling -----------------------------------------------------

def _tri_decode(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Index t of the pair (i, j), i < j, in the order sorted by j then i."""
    t = t.astype(np.int64)
    j = ((1 + np.sqrt(1 + 8 * t.astype(np.float64))) // 2).astype(np.int64)
    j -= (j * (j - 1) // 2 > t)
    j += ((j + 1) * j // 2 <= t)
    i = t - j * (j - 1) // 2
    return i, j


def _pair_stream(g, vp: np.ndarray, k: int, p: int, rng: np.random.Generator):
    """Yield k ordered lists of distinct vertex pairs drawn from V'."""
    idx = np.flatnonzero(vp)
    N = idx.size
    total = N * (N - 1) // 2
    if total == 0:
        for _ in range(k):
            yield np.zeros(0, np.int64), np.zeros(0, np.int64)
        return
    if p >= total and isinstance(g, LayeredView):
        # Every pair lands in the first group; pairs that do not straddle the
        # two layers are non-edges of the view, so dropping them leaves the
        # scanned edge order unchanged.
        lo = idx[g._in_lo[idx]]
        hi = idx[g._in_hi[idx]]
        cnt = lo.size * hi.size
        order = rng.permutation(cnt)
        yield lo[order // max(hi.size, 1)], hi[order % max(hi.size, 1)]
        for _ in range(k - 1):
            yield np.zeros(0, np.int64), np.zeros(0, np.int64)
        return
    want = min(k * p, total)
    if want == total:
        sel = rng.permutation(total)
    else:
        sel = rng.choice(total, size=want, replace=False)
    for gi in range(k):
        chunk = sel[gi * p:(gi + 1) * p]
        a, b = _tri_decode(chunk)
        yield idx[a], idx[b]


def greedy_scan(n: int, us: np.ndarray, vs: np.ndarray) -> list[tuple[int, int]]:
    taken = np.zeros(n, dtype=bool)
    out = []
    for u, v in zip(us.tolist(), vs.tolist()):
        if not taken[u] and not taken[v]:
            taken[u] = taken[v] = True
            out.append((u, v) if u < v else (v, u))
    return out


# -- estimators --------------------------------------------------------

def estimate_mu1(matching: list, mem_A: Membership, r1: int, delta_out: float, n: int,
                 rng: np.random.Generator) -> float:
    if not matching:
        return -delta_out * n / 2
    arr = np.asarray(matching, dtype=np.int64)
    pick = arr[rng.integers(0, len(matching), size=r1)]
    inside = mem_A.many(pick[:, 0]) & mem_A.many(pick[:, 1])
    X = int(inside.sum())
    return len(matching) * X / r1 - delta_out * n / 2


def estimate_mu2(oracle, residual: np.ndarray, r2: int, delta_out: float, n: int,
                 rng: np.random.Generator) -> float:
    if residual.size == 0 or isinstance(oracle, EmptyOracle):
        return -delta_out * n / 2
    pick = residual[rng.integers(0, residual.size, size=r2)]
    uniq, counts = np.unique(pick, return_counts=True)
    Y = sum(int(c) for v, c in zip(uniq.tolist(), counts.tolist())
            if oracle.query(v) is not None)
    return residual.size * Y / (2 * r2) - delta_out * n / 2


def removal_set(gbar: list, sampled: np.ndarray, eta: float, vprime: np.ndarray) -> np.ndarray:
    """Vertices of V' with at least eta neighbors in the sampled set, in Gbar."""
    n = vprime.size
    cnt = np.zeros(n, dtype=np.int64)
    if gbar:
        e = np.asarray(gbar, dtype=np.int64)
        np.add.at(cnt, e[:, 0], sampled[e[:, 1]])
        np.add.at(cnt, e[:, 1], sampled[e[:, 0]])
    return np.flatnonzero(vprime & (cnt >= eta))


def sample_aprime(mem_A: Membership, vprime: np.ndarray, r3: int, attempts: int,
                  rng: np.random.Generator) -> np.ndarray:
    """Indicator of r3 vertices drawn from A' = A cap V' by rejection from V'.
    Empty when some draw misses on all of its attempts."""
    got = np.zeros(vprime.size, dtype=bool)
    picked = rejection_sample(rng, np.flatnonzero(vprime), mem_A.many, r3, attempts)
    if picked is not None:
        got[picked] = True
    return got


# -- preprocessing and queries -----------------------------------------

def preprocess(g, mem_A: Membership, delta_in: float, eps, rng: np.random.Generator,
               preset: Preset | str = DESK, params: PrepParams | None = None,
               stats: PrepStats | None = None) -> Optional[PrepState]:
    preset = get_preset(preset)
    n = g.n
    P = params or prep_params(n, eps, delta_in, preset)
    if stats is None:
        stats = PrepStats()
    if n == 0:
        return None
    base = getattr(g, "base", g)
    probes0, mem0 = base.probes, base.membership_calls
    vp = np.ones(n, dtype=bool)
    try:
        for _ in range(P.T):
            stats.rounds += 1
            gbar: list = []
            for us, vs in _pair_stream(g, vp, P.k, P.p, rng):
                stats.groups += 1
                before = base.probes
                hit = g.adjacency_many(us, vs)
                stats.pair_probes += base.probes - before
                M = greedy_scan(n, us[hit], vs[hit])
                mu1 = estimate_mu1(M, mem_A, P.r1, P.delta_out, n, rng)
                stats.mu1.append(mu1)
                if mu1 >= 2 * P.delta_out * n:
                    mate = {}
                    for u, v in M:
                        mate[u], mate[v] = v, u
                    return PrepState(EXPLICIT, vp.copy(), M, mate, mem_A, P)
                matched = np.zeros(n, dtype=bool)
                if M:
                    matched[np.asarray(M).ravel()] = True
                residual = vp & ~matched
                view = InducedView(g, mem_A, host=residual, delta=P.degree_bound)
                W = build_induced_lowdeg_oracle(view, P.delta_out, rng, preset)
                mu2 = estimate_mu2(W, np.flatnonzero(residual), P.r2, P.delta_out, n, rng)
                stats.mu2.append(mu2)
                if mu2 >= 4 * P.delta_out * n:
                    mate = {}
                    for u, v in M:
                        mate[u], mate[v] = v, u
                    return PrepState(IMPLICIT, vp.copy(), M, mate, mem_A, P, W)
                gbar.extend(M)
            sp = sample_aprime(mem_A, vp, P.r3, P.attempts, rng)
            C = removal_set(gbar, sp, P.eta, vp)
            stats.removed.append(int(C.size))
            vp[C] = False
        return None
    finally:
        stats.probes += base.probes - probes0
        stats.membership_calls += base.membership_calls - mem0


class InducedMatchOracle:
    """Query handle over a PrepState."""

    def __init__(self, state: PrepState):
        self.state = state
        self.n = state.vprime.size
        self._cache: dict[int, Optional[tuple[int, int]]] = {}

    def query(self, v: int) -> Optional[tuple[int, int]]:
        got = self._cache.get(v, False)
        if got is not False:
            return got
        got = query(self.state, v)
        self._cache[v] = got
        return got


def query(state: PrepState, v: int) -> Optional[tuple[int, int]]:
    mem = state.membership
    if state.case == EXPLICIT:
        w = state.mate.get(v)
        if w is None or not mem(v) or not mem(w):
            return None
        return (v, w) if v < w else (w, v)
    if not state.vprime[v] or v in state.mate or not mem(v):
        return None
    return state.lowdeg_oracle.query(v)
