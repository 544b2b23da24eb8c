"""Seeded instance and update-stream generators."""

from __future__ import annotations

import numpy as np

from .errors import InvalidParameter
from .graph import QueryGraph, UpdateStream

Edge = tuple[int, int]


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _pos(name: str, x, lo=1) -> None:
    if x < lo:
        raise InvalidParameter(f"{name}={x} must be >= {lo}")


def _prob(name: str, p: float) -> None:
    if not (0 <= p <= 1):
        raise InvalidParameter(f"{name}={p} outside [0, 1]")


def erdos_renyi(n: int, p: float, seed=0) -> QueryGraph:
    _pos("n", n, 0)
    _prob("p", p)
    rng = _rng(seed)
    upper = np.triu(rng.random((n, n)) < p, 1)
    return QueryGraph.from_matrix(upper | upper.T)


def disjoint_edges(n: int, seed=0) -> QueryGraph:
    _pos("n", n, 0)
    return QueryGraph(n, [(2 * i, 2 * i + 1) for i in range(n // 2)])


def planted_perfect_bipartite(n: int, p: float = 0.0, seed=0) -> QueryGraph:
    """Bipartite graph on two halves of size n/2 holding a hidden perfect
    matching plus independent cross edges of probability p. Labels are
    shuffled."""
    if n % 2:
        raise InvalidParameter("n must be even")
    _prob("p", p)
    rng = _rng(seed)
    s = n // 2
    cross = rng.random((s, s)) < p
    cross[np.arange(s), rng.permutation(s)] = True
    label = rng.permutation(n)
    a, b = np.nonzero(cross)
    return QueryGraph(n, zip(label[a].tolist(), label[s + b].tolist()))


def planted_aug_paths(n: int, k: int, count: int, p: float = 0.0, seed=0
                      ) -> tuple[QueryGraph, list[Edge]]:
    """Graph and matching M with ``count`` vertex-disjoint augmenting paths of
    exactly 2k+1 edges.

    Remaining vertices are paired into matched edges with no free neighbors.
    Each pair of consecutive path positions also gets independent cross
    edges of probability p between different paths, which only adds
    augmenting paths of the same length.
    """
    _pos("k", k, 0)
    _pos("count", count, 0)
    _prob("p", p)
    width = 2 * k + 2
    if count * width > n:
        raise InvalidParameter(f"{count} paths of {width} vertices do not fit in n={n}")
    rng = _rng(seed)
    label = rng.permutation(n)
    pos = np.arange(count * width).reshape(count, width)
    edges: set[Edge] = set()
    matching: list[Edge] = []
    for j in range(width - 1):
        # j even: unmatched path edge; j odd: matched
        for i in range(count):
            edges.add((int(pos[i, j]), int(pos[i, j + 1])))
        if j % 2 == 1:
            matching.extend((int(pos[i, j]), int(pos[i, j + 1])) for i in range(count))
        elif p > 0 and count > 1:
            extra = rng.random((count, count)) < p
            a, b = np.nonzero(extra)
            edges.update((int(pos[x, j]), int(pos[y, j + 1])) for x, y in zip(a, b))
    rest = np.arange(count * width, n - (n - count * width) % 2).reshape(-1, 2)
    for u, v in rest.tolist():
        edges.add((u, v))
        matching.append((u, v))

    def lab(e):
        u, v = int(label[e[0]]), int(label[e[1]])
        return (u, v) if u < v else (v, u)

    return QueryGraph(n, sorted(map(lab, edges))), sorted(map(lab, matching))


def update_stream(n: int, updates: int, insert_rate: float = 1.0, delete_rate: float = 0.0,
                  checkpoint_every: int = 0, warmup: int = 0, seed=0) -> UpdateStream:
    """Random valid updates: the first ``warmup`` are insertions, after which
    each is an insertion or deletion in proportion to the two rates. A "?"
    checkpoint follows every ``checkpoint_every`` updates."""
    _pos("n", n, 2)
    _pos("updates", updates, 0)
    if insert_rate < 0 or delete_rate < 0 or insert_rate + delete_rate == 0:
        raise InvalidParameter("rates must be non-negative and not both zero")
    rng = _rng(seed)
    full = n * (n - 1) // 2
    present: list[Edge] = []
    where: dict[Edge, int] = {}
    items: list = []
    p_ins = insert_rate / (insert_rate + delete_rate)
    for t in range(updates):
        insert = t < warmup or rng.random() < p_ins
        if insert and len(present) == full:
            insert = False
        if not insert and not present:
            insert = True
        if insert:
            while True:
                u, v = (int(x) for x in rng.integers(0, n, size=2))
                e = (u, v) if u < v else (v, u)
                if u != v and e not in where:
                    break
            where[e] = len(present)
            present.append(e)
            items.append(("+",) + e)
        else:
            i = int(rng.integers(0, len(present)))
            e = present[i]
            last = present.pop()
            if last != e:
                present[i] = last
                where[last] = i
            del where[e]
            items.append(("-",) + e)
        if checkpoint_every and (t + 1) % checkpoint_every == 0:
            items.append(("?",))
    return UpdateStream(n, items)


GENERATORS = {
    "erdos-renyi": erdos_renyi,
    "disjoint-edges": disjoint_edges,
    "planted-perfect-bipartite": planted_perfect_bipartite,
    "planted-aug-paths": planted_aug_paths,
    "update-stream": update_stream,
}


def generate(kind: str, params: dict, seed=0):
    try:
        fn = GENERATORS[kind]
    except KeyError:
        raise InvalidParameter(f"unknown generator {kind!r}") from None
    try:
        return fn(**params, seed=seed)
    except TypeError as exc:
        raise InvalidParameter(str(exc)) from None
