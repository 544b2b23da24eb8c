"""Experiment specs, pipelines, reports and scaling fits.

Reports are JSON lines (one summary per seed) plus, for the dynamic
pipelines, a CSV of checkpoint rows. Every record carries the seed and the
spec hash. Wall-clock time goes to a separate ``.timing.jsonl`` file so the
report itself is reproducible byte for byte.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .boost import ExplicitMatch, augment
from .config import get_preset
from .dynamic import CHECKPOINT_COLUMNS, Baseline, DynamicMatcher, replay
from .errors import InsufficientData, InvalidParameter, InvariantViolation
from .exact import is_matching, max_matching_exact
from .generators import generate
from .graph import Membership, UpdateStream
from .induced import InducedMatchOracle, preprocess
from .lca import build_gmm_oracle
from .near_optimal import estimate_size, run_near_optimal

CSV_VERSION = 1
ALGORITHMS = ("gmm-lca", "induced-oracle", "augment", "near-optimal", "dynamic", "baseline")


@dataclass
class ExperimentSpec:
    generator: str
    gen_params: dict
    algorithm: str
    preset: str = "desk"
    params: dict = field(default_factory=dict)
    seeds: list = field(default_factory=lambda: [0])
    checkpoint_every: int = 0
    exact: bool = False
    budget: float | None = None
    output: str = "report"

    def canonical(self) -> str:
        d = asdict(self)
        d.pop("output")
        return json.dumps(d, sort_keys=True, separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:16]

    @classmethod
    def load(cls, path) -> "ExperimentSpec":
        return cls(**json.loads(Path(path).read_text()))

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(asdict(self), sort_keys=True, indent=2) + "\n")


def spec_hash(spec: ExperimentSpec) -> str:
    return spec.digest()


# -- pipelines ---------------------------------------------------------

def _exhaust(handle, n: int) -> list[tuple[int, int]]:
    """All edges reported by a match handle, checked for pairwise consistency."""
    out = set()
    for v in range(n):
        e = handle.query(v)
        if e is None:
            continue
        u, w = e
        if v not in e:
            raise InvariantViolation(f"query({v}) returned {e}, which misses v")
        other = w if u == v else u
        if handle.query(other) != e:
            raise InvariantViolation(f"inconsistent answers at {v} and {other}")
        out.add(e if u < w else (w, u))
    return sorted(out)


def _check(edges, g, exact_mu: int | None) -> None:
    if not is_matching(edges, g):
        raise InvariantViolation("reported edges are not a matching of the graph")
    if exact_mu is not None and len(edges) > exact_mu:
        raise InvariantViolation(f"|M|={len(edges)} exceeds mu={exact_mu}")


def _graph_of(obj):
    return obj[0] if isinstance(obj, tuple) else obj


def _pipe_gmm(spec, inst, rng, preset, exact):
    g = _graph_of(inst)
    dbar = g.degrees().mean() if g.n else 0.0
    eps = spec.params.get("eps", 0.25)
    oracle = build_gmm_oracle(g, dbar, eps, rng, preset)
    edges = _exhaust(oracle, g.n)
    return {"size": len(edges)}, edges, g


def _pipe_induced(spec, inst, rng, preset, exact):
    g = _graph_of(inst)
    eps = spec.params.get("eps", 0.25)
    delta_in = spec.params.get("delta_in", 0.25)
    frac = spec.params.get("member_fraction", 1.0)
    members = np.flatnonzero(rng.random(g.n) < frac)
    mem = Membership.of_set(members.tolist(), g.n, g)
    state = preprocess(g, mem, delta_in, eps, rng, preset)
    out = {"case": None if state is None else state.case,
           "membership_calls": g.membership_calls}
    if state is None:
        return {**out, "size": 0}, [], g.induced(_mask(members, g.n))
    edges = _exhaust(InducedMatchOracle(state), g.n)
    return {**out, "size": len(edges)}, edges, g.induced(_mask(members, g.n))


def _mask(members, n):
    m = np.zeros(n, dtype=bool)
    m[np.asarray(members, dtype=np.int64)] = True
    return m


def _pipe_augment(spec, inst, rng, preset, exact):
    if not isinstance(inst, tuple):
        raise InvalidParameter("augment needs a generator that emits a matching")
    g, M = inst
    k = spec.params.get("k", 1)
    gamma = spec.params.get("gamma", 0.2)
    backend = spec.params.get("backend", "sublinear")
    out = augment(g, ExplicitMatch(g.n, M), k, gamma, None, rng, preset, backend)
    edges = _exhaust(out.handle, g.n) if out.ok else sorted(M)
    return {"status": out.status, "size_in": len(M), "size": len(edges),
            "iterations": out.augmenter.t}, edges, g


def _pipe_near(spec, inst, rng, preset, exact):
    g = _graph_of(inst)
    gamma = spec.params.get("gamma", 0.2)
    state = run_near_optimal(g, gamma, rng, preset, spec.params.get("backend", "sublinear"))
    edges = _exhaust(state.handle, g.n)
    est = estimate_size(state.handle, gamma, g.n, rng, preset)
    return {"size": len(edges), "estimate": est, "rounds": state.rounds,
            "calls": state.calls}, edges, g


PIPELINES = {
    "gmm-lca": _pipe_gmm,
    "induced-oracle": _pipe_induced,
    "augment": _pipe_augment,
    "near-optimal": _pipe_near,
}


def _run_static(spec, seed, preset):
    inst = generate(spec.generator, spec.gen_params, seed)
    rng = np.random.default_rng([seed, 7])
    g = _graph_of(inst)
    summary, edges, target = PIPELINES[spec.algorithm](spec, inst, rng, preset, spec.exact)
    mu = max_matching_exact(target).size if spec.exact else None
    if spec.exact:
        _check(edges, target, mu)
    return {"n": g.n, "m": g.edge_count(), **summary, "exact_mu": mu,
            "probes": g.probes, "membership_calls": g.membership_calls}, []


def _run_dynamic(spec, seed, preset):
    stream = generate(spec.generator, spec.gen_params, seed)
    if not isinstance(stream, UpdateStream):
        raise InvalidParameter(f"{spec.algorithm} needs an update-stream generator")
    eps = spec.params.get("eps", 0.2)
    if spec.algorithm == "dynamic":
        maint = DynamicMatcher(stream.n, eps, seed, preset, spec.budget)
    else:
        maint = Baseline(stream.n, eps)
    rows = replay(maint, stream, spec.exact, spec.checkpoint_every or None)
    if spec.exact:
        for r in rows:
            if r["exact_mu"] is not None and r["mu_star"] > (1 + 2 * eps) * r["exact_mu"] + 0.1 * stream.n:
                raise InvariantViolation(f"published {r['mu_star']} far above mu={r['exact_mu']}")
        edges = (maint.matched_edges() if isinstance(maint, DynamicMatcher)
                 else maint.matching())
        _check(edges, maint.g.base, None)
    last = rows[-1] if rows else {}
    return {"n": stream.n, "updates": len(stream.updates()), "checkpoints": len(rows),
            "mu_star": last.get("mu_star", _final(maint)),
            "exact_mu": last.get("exact_mu"),
            "probes": maint.g.base.probes + maint.work}, rows


def _final(maint):
    return maint.size if isinstance(maint, Baseline) else maint.mu_star


def run(spec: ExperimentSpec, out_dir=None) -> Path:
    """Execute a spec; returns the path of the JSON-lines report."""
    if spec.algorithm not in ALGORITHMS:
        raise InvalidParameter(f"unknown algorithm {spec.algorithm!r}")
    preset = get_preset(spec.preset)
    base = Path(out_dir or ".") / spec.output
    base.parent.mkdir(parents=True, exist_ok=True)
    h = spec.digest()
    summaries, rows, timing = [], [], []
    for seed in spec.seeds:
        t0 = time.perf_counter()
        if spec.algorithm in ("dynamic", "baseline"):
            summary, seed_rows = _run_dynamic(spec, seed, preset)
        else:
            summary, seed_rows = _run_static(spec, seed, preset)
        timing.append({"seed": seed, "spec_hash": h,
                       "wall_s": round(time.perf_counter() - t0, 4)})
        summaries.append({"seed": seed, "spec_hash": h, "algorithm": spec.algorithm,
                          "preset": preset.name, **summary})
        rows.extend({"seed": seed, "spec_hash": h, **r} for r in seed_rows)
    report = base.with_suffix(".jsonl")
    with open(report, "w") as fh:
        for s in summaries:
            fh.write(json.dumps(s, sort_keys=True, default=_jsonable) + "\n")
    if spec.algorithm in ("dynamic", "baseline"):
        with open(base.with_suffix(".csv"), "w", newline="") as fh:
            fh.write(f"# checkpoint columns v{CSV_VERSION}\n")
            w = csv.DictWriter(fh, fieldnames=("seed", "spec_hash") + CHECKPOINT_COLUMNS)
            w.writeheader()
            for r in rows:
                w.writerow({k: ("" if r[k] is None else r[k]) for k in w.fieldnames})
    with open(base.with_suffix(".timing.jsonl"), "w") as fh:
        for t in timing:
            fh.write(json.dumps(t, sort_keys=True) + "\n")
    return report


def _jsonable(x):
    if isinstance(x, np.generic):
        return x.item()
    raise TypeError(f"cannot serialize {type(x).__name__}")


def read_report(path) -> list[dict]:
    with open(path) as fh:
        return [json.loads(line) for line in fh if line.strip()]


# -- scaling -----------------------------------------------------------

def fit_scaling(ns, counts) -> float:
    """Least-squares slope of log(count) against log(n)."""
    ns = np.asarray(ns, dtype=float)
    counts = np.asarray(counts, dtype=float)
    if ns.size != counts.size:
        raise InvalidParameter("ns and counts differ in length")
    if np.unique(ns).size < 3:
        raise InsufficientData("need at least three distinct sizes")
    if np.any(ns <= 0) or np.any(counts <= 0):
        raise InvalidParameter("sizes and counts must be positive")
    slope, _ = np.polyfit(np.log(ns), np.log(counts), 1)
    return float(slope)


def fit_reports(reports: list[dict], key: str = "probes") -> float:
    return fit_scaling([r["n"] for r in reports], [r[key] for r in reports])


def doubling(lo: int, hi: int) -> list[int]:
    return [lo * 2 ** i for i in range(int(math.log2(hi // lo)) + 1)]
