"""Success rates of one boosting call on planted length-3 augmenting paths,
explicit stub against the sublinear backend."""

import argparse

import numpy as np

from sublinmatch.bench import _exhaust
from sublinmatch.boost import ExplicitMatch, augment
from sublinmatch.generators import planted_aug_paths


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=512)
    ap.add_argument("--gamma", type=float, default=0.2)
    ap.add_argument("--cross", type=float, nargs="+", default=[0.0, 0.02, 0.05])
    ap.add_argument("--seeds", type=int, default=20)
    a = ap.parse_args()
    count = int(np.ceil(a.gamma * a.n))
    for p in a.cross:
        for backend in ("explicit", "sublinear"):
            wins = gain = 0
            for seed in range(a.seeds):
                g, M = planted_aug_paths(a.n, 1, count, p, seed=seed)
                out = augment(g, ExplicitMatch(a.n, M), 1, a.gamma, None,
                              np.random.default_rng([seed, 8]), backend=backend)
                if out.ok:
                    wins += 1
                    gain += len(_exhaust(out.handle, a.n)) - len(M)
            print(f"cross={p:<5} {backend:<9} success {wins}/{a.seeds}  mean gain "
                  f"{gain / max(wins, 1):.1f}")


if __name__ == "__main__":
    main()
