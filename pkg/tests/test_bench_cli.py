import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sublinmatch.bench import ExperimentSpec, doubling, fit_scaling, read_report, run
from sublinmatch.cli import EXIT_VIOLATION, main
from sublinmatch.errors import InsufficientData, InvalidParameter
from sublinmatch.exact import is_matching, max_matching_exact
from sublinmatch.generators import (disjoint_edges, erdos_renyi, generate, planted_aug_paths,
                                    planted_perfect_bipartite, update_stream)
from sublinmatch.graph import QueryGraph, read_graph, write_graph


# -- generators --------------------------------------------------------

def test_disjoint_edges_ten():
    g = disjoint_edges(10)
    assert g.edge_list() == [(0, 1), (2, 3), (4, 5), (6, 7), (8, 9)]
    assert max_matching_exact(g).size == 5


def test_planted_bipartite_has_perfect_matching():
    for seed in range(5):
        g = planted_perfect_bipartite(60, 0.1, seed=seed)
        assert max_matching_exact(g).size == 30


def test_planted_paths_structure():
    g, M = planted_aug_paths(100, 1, 10, 0.0, seed=1)
    assert is_matching(M, g)
    assert len(M) == 10 + 30
    assert max_matching_exact(g).size == len(M) + 10
    with pytest.raises(InvalidParameter):
        planted_aug_paths(10, 1, 5)


def test_generators_are_deterministic():
    assert erdos_renyi(40, 0.2, 3).edge_list() == erdos_renyi(40, 0.2, 3).edge_list()
    assert erdos_renyi(40, 0.2, 3).edge_list() != erdos_renyi(40, 0.2, 4).edge_list()
    assert update_stream(20, 50, 1, 1, seed=2).items == update_stream(20, 50, 1, 1, seed=2).items


@given(st.integers(2, 12), st.integers(0, 80), st.floats(0, 1), st.integers(0, 2**16))
def test_update_streams_are_valid(n, k, dr, seed):
    s = update_stream(n, k, 1.0, dr, checkpoint_every=7, seed=seed)
    present = set()
    for op, u, v in s.updates():
        e = (min(u, v), max(u, v))
        assert u != v
        if op == "+":
            assert e not in present
            present.add(e)
        else:
            assert e in present
            present.remove(e)
    assert sum(1 for it in s.items if it[0] == "?") == k // 7


def test_generate_rejects_bad_input():
    with pytest.raises(InvalidParameter):
        generate("nope", {}, 0)
    with pytest.raises(InvalidParameter):
        generate("erdos-renyi", {"n": 10}, 0)
    with pytest.raises(InvalidParameter):
        generate("erdos-renyi", {"n": 10, "p": 2}, 0)


# -- bench -------------------------------------------------------------

def test_fit_scaling_synthetic():
    ns = [64, 128, 256, 512]
    assert fit_scaling(ns, [n**2 for n in ns]) == pytest.approx(2.0)
    assert fit_scaling(ns, [3 * n**1.5 for n in ns]) == pytest.approx(1.5)


def test_fit_scaling_needs_three_sizes():
    with pytest.raises(InsufficientData):
        fit_scaling([64, 128, 64], [1, 2, 3])
    with pytest.raises(InvalidParameter):
        fit_scaling([1, 2, 3], [1, 2])
    assert doubling(64, 512) == [64, 128, 256, 512]


def test_spec_hash_ignores_output():
    a = ExperimentSpec("disjoint-edges", {"n": 10}, "gmm-lca", output="x")
    b = ExperimentSpec("disjoint-edges", {"n": 10}, "gmm-lca", output="y")
    c = ExperimentSpec("disjoint-edges", {"n": 12}, "gmm-lca")
    assert a.digest() == b.digest() != c.digest()
    assert len(a.digest()) == 16


def test_spec_roundtrip(tmp_path):
    a = ExperimentSpec("erdos-renyi", {"n": 30, "p": 0.1}, "near-optimal", seeds=[1, 2])
    a.dump(tmp_path / "s.json")
    assert ExperimentSpec.load(tmp_path / "s.json") == a


@pytest.mark.parametrize("algo,gen,params", [
    ("gmm-lca", "erdos-renyi", {"n": 60, "p": 0.1}),
    ("induced-oracle", "planted-perfect-bipartite", {"n": 64, "p": 0.05}),
    ("augment", "planted-aug-paths", {"n": 128, "k": 1, "count": 26, "p": 0.05}),
    ("near-optimal", "erdos-renyi", {"n": 60, "p": 0.1}),
])
def test_static_pipelines(tmp_path, algo, gen, params):
    spec = ExperimentSpec(gen, params, algo, seeds=[0, 1], exact=True)
    rows = read_report(run(spec, tmp_path))
    assert [r["seed"] for r in rows] == [0, 1]
    for r in rows:
        assert r["spec_hash"] == spec.digest()
        assert r["size"] <= r["exact_mu"]


def test_dynamic_pipeline_writes_csv(tmp_path):
    spec = ExperimentSpec("update-stream", {"n": 40, "updates": 120, "delete_rate": 0.3},
                          "baseline", checkpoint_every=40, exact=True, output="dyn")
    run(spec, tmp_path)
    lines = (tmp_path / "dyn.csv").read_text().splitlines()
    assert lines[0] == "# checkpoint columns v1"
    assert lines[1] == "seed,spec_hash,update_index,mu_star,exact_mu,probes_since_last,phase_type"
    assert len(lines) == 5
    assert (tmp_path / "dyn.timing.jsonl").exists()


def test_reports_are_byte_identical(tmp_path):
    spec = ExperimentSpec("update-stream", {"n": 40, "updates": 100, "delete_rate": 0.3},
                          "dynamic", params={"eps": 0.3}, seeds=[0, 1], checkpoint_every=25)
    run(spec, tmp_path / "a")
    run(spec, tmp_path / "b")
    for suf in (".jsonl", ".csv"):
        assert (tmp_path / "a" / ("report" + suf)).read_bytes() == \
            (tmp_path / "b" / ("report" + suf)).read_bytes()


def test_unknown_algorithm():
    with pytest.raises(InvalidParameter):
        run(ExperimentSpec("disjoint-edges", {"n": 4}, "magic"))


# -- cli ---------------------------------------------------------------

def test_cli_gen_and_verify(tmp_path, capsys):
    out = tmp_path / "g.txt"
    assert main(["gen", "planted-aug-paths", "-p", "n=40", "-p", "k=1", "-p", "count=5",
                 "--out", str(out)]) == 0
    assert main(["verify", str(out), "--matching", str(out) + ".matching"]) == 0
    res = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert res["valid"] is True and res["mu"] == res["size"] + 5


def test_cli_verify_rejects_bad_matching(tmp_path):
    g = tmp_path / "g.txt"
    bad = tmp_path / "m.txt"
    write_graph(g, QueryGraph(4, [(0, 1), (1, 2), (2, 3)]))
    write_graph(bad, QueryGraph(4, [(0, 1), (1, 2)]))
    assert main(["verify", str(g), "--matching", str(bad)]) == EXIT_VIOLATION
    write_graph(bad, QueryGraph(4, [(0, 3)]))
    assert main(["verify", str(g), "--matching", str(bad)]) == EXIT_VIOLATION


def test_cli_run_and_scaling(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    paths = []
    for n in (32, 64, 128):
        assert main(["run", "--generator", "disjoint-edges", "--gen-param", f"n={n}",
                     "--algorithm", "gmm-lca", "--seed", "0", "1", "--out", f"r{n}"]) == 0
        paths.append(f"r{n}.jsonl")
    capsys.readouterr()
    assert main(["scaling", *paths]) == 0
    res = json.loads(capsys.readouterr().out)
    assert res["points"] == 6
    assert main(["scaling", paths[0]]) == 1


def test_cli_bad_params_exit_one(tmp_path):
    assert main(["gen", "erdos-renyi", "-p", "n=5", "--out", str(tmp_path / "x")]) == 1
