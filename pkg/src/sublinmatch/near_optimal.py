"""Near-optimal matching oracle by repeated boosting, plus size estimation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .boost import DONE, admissible_eps, augment, boost_params
from .config import DESK, Preset, get_preset
from .errors import CallCapExceeded, InvalidParameter
from .lca import EmptyOracle


@dataclass
class RoundState:
    handle: object
    eps_in: Fraction | None = None
    rounds: int = 0
    calls: int = 0
    sizes: list = field(default_factory=list)       # exact-free size log: |M| after each success
    outcomes: list = field(default_factory=list)    # (round, i, status, iterations)


def _handle_size(handle, n: int) -> int:
    return sum(1 for v in range(n) if (e := handle.query(v)) is not None and e[0] == v)


def run_near_optimal(g, gamma: float, rng: np.random.Generator,
                     preset: Preset | str = DESK, backend: str = "sublinear",
                     track_sizes: bool = False) -> RoundState:
    if not (0 < gamma < 1):
        raise InvalidParameter("gamma must lie in (0, 1)")
    preset = get_preset(preset)
    n = g.n
    k = math.ceil(1 / gamma - 1e-9)
    g2 = gamma ** preset.near.boost_gamma_power
    cap = preset.near.call_cap
    if cap is None:
        cap = (k + 1) * (n // 2 + 2)
    state = RoundState(EmptyOracle(n))
    if track_sizes:
        state.sizes.append(0)
    progress = True
    while progress:
        progress = False
        state.rounds += 1
        for i in range(k + 1):
            if state.calls >= cap:
                raise CallCapExceeded(f"{state.calls} augment calls")
            state.calls += 1
            P = boost_params(i, g2, None, preset)
            eps = P.eps_in if state.eps_in is None else min(state.eps_in, admissible_eps(P.T))
            P = boost_params(i, g2, eps, preset)
            out = augment(g, state.handle, i, g2, eps, rng, preset, backend, params=P)
            state.outcomes.append((state.rounds, i, out.status, out.augmenter.t))
            if out.status == DONE:
                state.handle = out.handle
                state.eps_in = out.eps_out
                progress = True
                if track_sizes:
                    state.sizes.append(_handle_size(out.handle, n))
    return state


def near_optimal_oracle(g, gamma: float, rng: np.random.Generator,
                        preset: Preset | str = DESK, backend: str = "sublinear"):
    return run_near_optimal(g, gamma, rng, preset, backend).handle


def estimate_size(handle, gamma: float, n: int, rng: np.random.Generator,
                  preset: Preset | str = DESK) -> float:
    preset = get_preset(preset)
    if n == 0:
        return 0.0
    s = max(1, math.ceil(preset.near.size_samples * max(preset.log(n), 1.0) / gamma ** 2))
    pick = rng.integers(0, n, size=s)
    uniq, counts = np.unique(pick, return_counts=True)
    hit = sum(int(c) for v, c in zip(uniq.tolist(), counts.tolist())
              if handle.query(v) is not None)
    return n * (hit / s) / 2
