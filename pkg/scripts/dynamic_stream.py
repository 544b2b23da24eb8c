"""Replay an insert-heavy-then-churn stream through the dynamic matcher and
the periodic baseline; print the checkpoint rows side by side."""

import argparse

from sublinmatch.dynamic import Baseline, DynamicMatcher, replay
from sublinmatch.generators import update_stream


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--updates", type=int, default=10_000)
    ap.add_argument("--warmup", type=int, default=6000)
    ap.add_argument("--eps", type=float, default=0.2)
    ap.add_argument("--every", type=int, default=500)
    ap.add_argument("--budget", type=float, default=None)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    s = update_stream(a.n, a.updates, 1.0, 1.0, warmup=a.warmup, seed=a.seed)
    dyn = replay(DynamicMatcher(a.n, a.eps, a.seed, budget=a.budget), s, True, a.every)
    base = replay(Baseline(a.n, a.eps), s, False, a.every)
    print(f"{'t':>6} {'mu':>5} {'mu*':>8} {'type':>4} {'work':>10} {'baseline':>8} {'work':>10}")
    for r, b in zip(dyn, base):
        print(f"{r['update_index']:>6} {r['exact_mu']:>5} {r['mu_star']:>8.1f} {r['phase_type']:>4}"
              f" {r['probes_since_last']:>10} {b['mu_star']:>8} {b['probes_since_last']:>10}")


if __name__ == "__main__":
    main()
