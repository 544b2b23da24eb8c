"""Probe counts of induced-oracle preprocessing over a doubling sweep of n,
with the fitted exponent."""

import argparse
import json

import numpy as np

from sublinmatch.bench import doubling, fit_scaling
from sublinmatch.generators import planted_perfect_bipartite
from sublinmatch.graph import Membership
from sublinmatch.induced import PrepStats, preprocess


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--lo", type=int, default=256)
    ap.add_argument("--hi", type=int, default=2048)
    ap.add_argument("--eps", type=float, default=0.25)
    ap.add_argument("--delta-in", type=float, default=0.25)
    ap.add_argument("--seeds", type=int, default=3)
    a = ap.parse_args()
    ns, probes = [], []
    for n in doubling(a.lo, a.hi):
        for seed in range(a.seeds):
            g = planted_perfect_bipartite(n, 4.0 / n, seed=seed)
            stats = PrepStats()
            st = preprocess(g, Membership.everything(n, g), a.delta_in, a.eps,
                            np.random.default_rng(seed), stats=stats)
            ns.append(n)
            probes.append(stats.probes)
            print(json.dumps({"n": n, "seed": seed, "case": st and st.case,
                              "probes": stats.probes, "rounds": stats.rounds}))
    print(json.dumps({"exponent": round(fit_scaling(ns, probes), 4)}))


if __name__ == "__main__":
    main()
