"""Command line: gen, run, verify, scaling."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import ALGORITHMS, ExperimentSpec, fit_reports, read_report, run
from .errors import InsufficientData, InvalidParameter, InvariantViolation
from .exact import is_matching, max_matching_exact
from .generators import GENERATORS, generate
from .graph import QueryGraph, read_graph, write_graph, write_updates

EXIT_VIOLATION = 2


def _kv(pairs: list[str]) -> dict:
    """Parse key=value pairs, reading values as JSON when possible."""
    out = {}
    for p in pairs or []:
        key, _, raw = p.partition("=")
        if not key or not _:
            raise InvalidParameter(f"expected key=value, got {p!r}")
        try:
            out[key.replace("-", "_")] = json.loads(raw)
        except json.JSONDecodeError:
            out[key.replace("-", "_")] = raw
    return out


def cmd_gen(a) -> int:
    obj = generate(a.kind, _kv(a.param), a.seed)
    out = Path(a.out)
    if isinstance(obj, QueryGraph):
        write_graph(out, obj)
    elif isinstance(obj, tuple):
        g, M = obj
        write_graph(out, g)
        write_graph(out.with_name(out.name + ".matching"), QueryGraph(g.n, M))
    else:
        write_updates(out, obj)
    return 0


def cmd_run(a) -> int:
    if a.spec:
        spec = ExperimentSpec.load(a.spec)
    else:
        if not (a.generator and a.algorithm):
            raise InvalidParameter("give a spec file or both --generator and --algorithm")
        spec = ExperimentSpec(a.generator, _kv(a.gen_param), a.algorithm)
    if a.param:
        spec.params = {**spec.params, **_kv(a.param)}
    if a.preset:
        spec.preset = a.preset
    if a.seed is not None:
        spec.seeds = list(a.seed)
    if a.checkpoint_every is not None:
        spec.checkpoint_every = a.checkpoint_every
    if a.exact:
        spec.exact = True
    if a.budget is not None:
        spec.budget = a.budget
    if a.out:
        spec.output = a.out
    report = run(spec)
    print(report)
    return 0


def cmd_verify(a) -> int:
    g = read_graph(a.graph)
    mu = max_matching_exact(g).size
    result = {"n": g.n, "m": g.edge_count(), "mu": mu}
    status = 0
    if a.matching:
        M = read_graph(a.matching).edge_list()
        ok = is_matching(M, g)
        result.update(size=len(M), valid=ok)
        if not ok:
            status = EXIT_VIOLATION
    print(json.dumps(result, sort_keys=True))
    return status


def cmd_scaling(a) -> int:
    reports = [r for path in a.reports for r in read_report(path)]
    slope = fit_reports(reports, a.key)
    print(json.dumps({"exponent": round(slope, 4), "points": len(reports)}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sublinmatch")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a generated instance or update stream")
    p.add_argument("kind", choices=sorted(GENERATORS))
    p.add_argument("--param", "-p", action="append", metavar="KEY=VALUE")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", "-o", required=True)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("run", help="run an experiment spec")
    p.add_argument("spec", nargs="?")
    p.add_argument("--generator", choices=sorted(GENERATORS))
    p.add_argument("--gen-param", action="append", metavar="KEY=VALUE")
    p.add_argument("--algorithm", choices=ALGORITHMS)
    p.add_argument("--param", "-p", action="append", metavar="KEY=VALUE")
    p.add_argument("--preset", choices=("paper", "desk"))
    p.add_argument("--seed", type=int, nargs="+")
    p.add_argument("--checkpoint-every", type=int)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--budget", type=float, help="per-update work budget (deamortized mode)")
    p.add_argument("--out", "-o")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("verify", help="exact matching number, optional matching check")
    p.add_argument("graph")
    p.add_argument("--matching")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("scaling", help="fit the probe exponent over reports")
    p.add_argument("reports", nargs="+")
    p.add_argument("--key", default="probes")
    p.set_defaults(fn=cmd_scaling)
    return ap


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    try:
        return a.fn(a)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (InvalidParameter, InsufficientData) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
