"""Constant bundles for the two presets.

``paper`` keeps the constants at full size (size guarantees are vacuous at any
feasible n). ``desk`` rescales them so that guarantees become observable at
n up to a few thousand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace


@dataclass(frozen=True)
class LcaConfig:
    testperm_factor: float = 1000.0   # r = factor * log n / eps
    perm_factor: float = 4.0          # ceil(factor * log2 n) candidate permutations
    ell_mult: float = 8.0             # ell = ell_mult * alpha / eps
    sample_attempt_factor: float = 1.0  # rejection attempts = factor * log n / eps
    testperm_cap: int | None = None


@dataclass(frozen=True)
class PrepConfig:
    pair_factor: float = 100.0
    sample_factor: float = 1000.0     # r1 = r2
    r3_factor: float = 1000.0
    out_divisor: float = 1e8
    out_power: int = 5                # delta_out = delta_in**power / divisor
    eta_factor: float = 0.1
    rounds_factor: float = 100.0      # T = rounds_factor / delta_in**2
    rounds_cap: int | None = None
    sample_cap: int | None = None     # cap on r1, r2, r3
    attempt_factor: float = 1.0       # rejection attempts per A' sample
    degree_power: float = 2.0         # low-degree bound n**(degree_power * eps)


@dataclass(frozen=True)
class BoostConfig:
    schedule: str = "paper"           # "paper" | "geometric"
    psi: float | None = None          # None: numeric selection from gamma, k
    survival_slack: float = 1.0
    rounds_mult: float = 1.0          # T = ceil(rounds_mult*(k+1)*sum 1/psi_i) + k + 2
    iteration_cap: int | None = None


@dataclass(frozen=True)
class NearOptConfig:
    size_samples: float = 48.0        # s = ceil(c_s log n / gamma**2)
    call_cap: int | None = None
    boost_gamma_power: int = 2        # Augment is called with gamma**power


@dataclass(frozen=True)
class DynamicConfig:
    alpha: float = 3.0
    contr_factor: float = 512.0       # T_contr = ceil(factor * ln n / eps**2)
    eps0_ratio: float = 0.1
    contr_cap: int | None = None
    gamma_power: int = 2              # type-II oracles run with gamma = eps**power


@dataclass(frozen=True)
class Preset:
    name: str
    log_base: float = 2.0
    lca: LcaConfig = field(default_factory=LcaConfig)
    prep: PrepConfig = field(default_factory=PrepConfig)
    boost: BoostConfig = field(default_factory=BoostConfig)
    near: NearOptConfig = field(default_factory=NearOptConfig)
    dynamic: DynamicConfig = field(default_factory=DynamicConfig)

    def log(self, x: float) -> float:
        if x <= 1:
            return 0.0
        return math.log(x, self.log_base)

    def with_(self, **kw) -> "Preset":
        return replace(self, **kw)


PAPER = Preset(name="paper")

DESK = Preset(
    name="desk",
    lca=LcaConfig(testperm_factor=4.0, perm_factor=4.0, ell_mult=8.0,
                  sample_attempt_factor=4.0, testperm_cap=400),
    prep=PrepConfig(pair_factor=1.0, sample_factor=4.0, r3_factor=4.0,
                    out_divisor=8.0, out_power=1, eta_factor=0.1,
                    rounds_factor=1.0, rounds_cap=4, sample_cap=2000,
                    attempt_factor=4.0),
    boost=BoostConfig(schedule="geometric", psi=0.05, iteration_cap=400),
    near=NearOptConfig(size_samples=48.0, call_cap=None),
    dynamic=DynamicConfig(alpha=3.0, contr_factor=0.05, eps0_ratio=0.1, contr_cap=16,
                          gamma_power=1),
)

PRESETS = {"paper": PAPER, "desk": DESK}


def get_preset(name: str | Preset) -> Preset:
    if isinstance(name, Preset):
        return name
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}") from None
