"""Graphs under adjacency-matrix access, with probe accounting."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

import numpy as np

from .errors import (BudgetExceeded, DuplicateInsert, InvalidVertex,
                     MissingDelete, SelfLoop)

_MASK64 = (1 << 64) - 1


@dataclass
class ProbeBudget:
    limit: float
    used: int = 0

    def charge(self, k: int = 1) -> None:
        if self.used + k > self.limit:
            raise BudgetExceeded(f"budget {self.limit} exhausted")
        self.used += k

    @property
    def remaining(self) -> float:
        return self.limit - self.used


class QueryGraph:
    """Undirected simple graph whose only access path is the adjacency probe.

    ``probes`` counts every matrix entry inspected; ``membership_calls`` is
    bumped by membership oracles that are bound to this graph.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("n must be non-negative")
        self.n = int(n)
        self._adj = np.zeros((self.n, self.n), dtype=bool)
        self.probes = 0
        self.membership_calls = 0
        for u, v in edges:
            self._check(u)
            self._check(v)
            if u == v:
                raise SelfLoop((u, v))
            self._adj[u, v] = self._adj[v, u] = True

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "QueryGraph":
        a = np.asarray(matrix, dtype=bool)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("square matrix required")
        if a.diagonal().any() or (a != a.T).any():
            raise ValueError("matrix must be symmetric with empty diagonal")
        g = cls(a.shape[0])
        g._adj = a.copy()
        return g

    def _check(self, v) -> None:
        if not (0 <= v < self.n):
            raise InvalidVertex(v)

    # -- counted access -------------------------------------------------
    def adjacency(self, u: int, v: int) -> bool:
        self._check(u)
        self._check(v)
        self.probes += 1
        return bool(self._adj[u, v])

    def adjacency_many(self, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        self.probes += int(us.size)
        return self._adj[us, vs]

    def row(self, v: int, budget: ProbeBudget | None = None) -> np.ndarray:
        """Neighbors of v, found by probing the whole matrix row (n probes)."""
        self._check(v)
        if budget is not None:
            budget.charge(self.n)
        self.probes += self.n
        return np.flatnonzero(self._adj[v])

    # -- uncounted ground truth, for verification only ------------------
    def edge_list(self) -> list[tuple[int, int]]:
        us, vs = np.nonzero(np.triu(self._adj, 1))
        return list(zip(us.tolist(), vs.tolist()))

    def edge_count(self) -> int:
        return int(np.triu(self._adj, 1).sum())

    def matrix(self) -> np.ndarray:
        return self._adj.copy()

    def degrees(self) -> np.ndarray:
        return self._adj.sum(axis=1)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._adj[u, v])

    def copy(self) -> "QueryGraph":
        g = QueryGraph(self.n)
        g._adj = self._adj.copy()
        return g

    def induced(self, keep: np.ndarray) -> "QueryGraph":
        """Same vertex set, edges restricted to pairs inside ``keep``."""
        keep = np.asarray(keep, dtype=bool)
        g = QueryGraph(self.n)
        g._adj = self._adj & keep[:, None] & keep[None, :]
        return g


def neighbors_via_matrix(g, v: int, budget: ProbeBudget | None = None) -> list[int]:
    return g.row(v, budget).tolist()


class LayeredView:
    """Bipartite slice of a base graph between two vertex layers.

    Pairs not straddling the two layers answer False without probing the
    base graph; real probes are charged to the base.
    """

    def __init__(self, base: QueryGraph, layer: np.ndarray, lo: int, hi: int):
        self.base = base
        self.n = base.n
        self.layer = layer
        self.lo, self.hi = lo, hi
        self._in_lo = layer == lo
        self._in_hi = layer == hi

    @property
    def probes(self) -> int:
        return self.base.probes

    def _cross(self, us, vs):
        return (self._in_lo[us] & self._in_hi[vs]) | (self._in_hi[us] & self._in_lo[vs])

    def adjacency(self, u: int, v: int) -> bool:
        if not bool(self._cross(u, v)):
            return False
        return self.base.adjacency(u, v)

    def adjacency_many(self, us, vs) -> np.ndarray:
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        out = np.zeros(us.size, dtype=bool)
        sel = np.flatnonzero(self._cross(us, vs))
        if sel.size:
            out[sel] = self.base.adjacency_many(us[sel], vs[sel])
        return out

    def row(self, v: int, budget: ProbeBudget | None = None) -> np.ndarray:
        if self._in_lo[v]:
            other = np.flatnonzero(self._in_hi)
        elif self._in_hi[v]:
            other = np.flatnonzero(self._in_lo)
        else:
            return np.zeros(0, dtype=np.int64)
        if budget is not None:
            budget.charge(other.size)
        hit = self.base.adjacency_many(np.full(other.size, v), other)
        return other[hit]


class DynamicGraph:
    def __init__(self, n: int):
        self.base = QueryGraph(n)
        self.m = 0
        self.update_log: list[tuple[str, int, int]] = []

    @property
    def n(self) -> int:
        return self.base.n

    def _pair(self, u, v):
        self.base._check(u)
        self.base._check(v)
        if u == v:
            raise SelfLoop((u, v))

    def insert(self, u: int, v: int) -> None:
        self._pair(u, v)
        if self.base._adj[u, v]:
            raise DuplicateInsert((u, v))
        self.base._adj[u, v] = self.base._adj[v, u] = True
        self.m += 1
        self.update_log.append(("+", u, v))

    def delete(self, u: int, v: int) -> None:
        self._pair(u, v)
        if not self.base._adj[u, v]:
            raise MissingDelete((u, v))
        self.base._adj[u, v] = self.base._adj[v, u] = False
        self.m -= 1
        self.update_log.append(("-", u, v))

    def apply_update(self, op: str, u: int, v: int) -> None:
        if op in ("+", "insert"):
            self.insert(u, v)
        elif op in ("-", "delete"):
            self.delete(u, v)
        else:
            raise ValueError(f"unknown update op {op!r}")

    @classmethod
    def replay(cls, n: int, log: Iterable[tuple[str, int, int]]) -> "DynamicGraph":
        g = cls(n)
        for op, u, v in log:
            g.apply_update(op, u, v)
        return g


def _mix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def _mix64_np(x: np.ndarray) -> np.ndarray:
    x = x + np.uint64(0x9E3779B97F4A7C15)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


@dataclass(frozen=True)
class EdgePermutation:
    """Implicit random order on unordered pairs: hash priority, then (min, max)."""

    seed: int

    def _salt(self) -> int:
        return _mix64(self.seed & _MASK64)

    def rank(self, u: int, v: int) -> tuple[int, int, int]:
        if u == v:
            raise SelfLoop((u, v))
        a, b = (u, v) if u < v else (v, u)
        return (_mix64(self._salt() ^ ((a << 32) | b)), a, b)

    def hashes(self, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
        us = np.asarray(us, dtype=np.uint64)
        vs = np.asarray(vs, dtype=np.uint64)
        a = np.minimum(us, vs)
        b = np.maximum(us, vs)
        with np.errstate(over="ignore"):
            return _mix64_np(np.uint64(self._salt()) ^ ((a << np.uint64(32)) | b))

    def sort_pairs(self, pairs: list[tuple[int, int]]) -> list[tuple[int, int]]:
        return sorted(pairs, key=lambda e: self.rank(*e))


def edge_rank(pi: EdgePermutation, u: int, v: int) -> tuple[int, int, int]:
    return pi.rank(u, v)


class Membership:
    """Counted, memoized A-membership oracle over vertices 0..n-1.

    ``calls`` counts every question asked; ``evaluations`` counts how often the
    underlying predicate actually ran. When bound to a graph, calls are also
    added to that graph's ``membership_calls``.
    """

    def __init__(self, fn: Callable[[int], bool], n: int, graph=None):
        self._fn = fn
        self.n = n
        self._graph = getattr(graph, "base", graph)
        self._known = np.full(n, -1, dtype=np.int8)
        self.calls = 0
        self.evaluations = 0

    def _count(self, k: int) -> None:
        self.calls += k
        if self._graph is not None:
            self._graph.membership_calls += k

    def _eval(self, v: int) -> bool:
        self.evaluations += 1
        out = bool(self._fn(v))
        self._known[v] = out
        return out

    def __call__(self, v: int) -> bool:
        self._count(1)
        k = self._known[v]
        if k >= 0:
            return bool(k)
        return self._eval(int(v))

    def first_member(self, cands: np.ndarray) -> int | None:
        """First candidate in A, asking about candidates in order."""
        pos = 0
        while pos < cands.size:
            known = self._known[cands[pos:]]
            hits = np.flatnonzero(known == 1)
            unknown = np.flatnonzero(known == -1)
            h = hits[0] if hits.size else cands.size
            u = unknown[0] if unknown.size else cands.size
            if h < u:
                self._count(int(h) + 1)
                return int(cands[pos + h])
            if u >= cands.size - pos:
                self._count(cands.size - pos)
                return None
            self._count(int(u) + 1)
            v = int(cands[pos + u])
            if self._eval(v):
                return v
            pos += int(u) + 1
        return None

    def many(self, vs: np.ndarray) -> np.ndarray:
        vs = np.asarray(vs, dtype=np.int64)
        self._count(int(vs.size))
        known = self._known[vs]
        for i in np.flatnonzero(known == -1):
            v = int(vs[i])
            if self._known[v] < 0:
                self._eval(v)
        return self._known[vs] == 1

    @classmethod
    def of_set(cls, members, n: int, graph=None) -> "Membership":
        s = frozenset(int(x) for x in members)
        return cls(s.__contains__, n, graph)

    @classmethod
    def of_mask(cls, mask: np.ndarray, graph=None) -> "Membership":
        mask = np.asarray(mask, dtype=bool)
        return cls(lambda v: bool(mask[v]), mask.size, graph)

    @classmethod
    def everything(cls, n: int, graph=None) -> "Membership":
        return cls(lambda v: True, n, graph)


# -- file formats ------------------------------------------------------

def write_graph(path, g: QueryGraph) -> None:
    edges = g.edge_list()
    with open(path, "w") as fh:
        fh.write(f"{g.n} {len(edges)}\n")
        for u, v in edges:
            fh.write(f"{u} {v}\n")


def read_graph(path) -> QueryGraph:
    with open(path) as fh:
        n, m = (int(x) for x in fh.readline().split())
        edges = []
        for line in fh:
            line = line.strip()
            if line:
                u, v = (int(x) for x in line.split())
                edges.append((u, v))
    if len(edges) != m:
        raise ValueError(f"header says {m} edges, found {len(edges)}")
    return QueryGraph(n, edges)


@dataclass
class UpdateStream:
    n: int
    items: list = field(default_factory=list)   # ("+", u, v) | ("-", u, v) | ("?",)

    def __iter__(self) -> Iterator:
        return iter(self.items)

    def updates(self) -> list[tuple[str, int, int]]:
        return [it for it in self.items if it[0] != "?"]


def write_updates(path, stream: UpdateStream) -> None:
    with open(path, "w") as fh:
        fh.write(f"# n {stream.n}\n")
        for it in stream.items:
            fh.write("?\n" if it[0] == "?" else f"{it[0]} {it[1]} {it[2]}\n")


def read_updates(path) -> UpdateStream:
    n = None
    items = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if len(parts) == 2 and parts[0] == "n":
                    n = int(parts[1])
                continue
            parts = line.split()
            if parts[0] == "?":
                items.append(("?",))
            elif parts[0] in "+-":
                items.append((parts[0], int(parts[1]), int(parts[2])))
            else:
                raise ValueError(f"bad update line {line!r}")
    if n is None:
        n = 1 + max((max(it[1], it[2]) for it in items if it[0] != "?"), default=-1)
    return UpdateStream(n, items)
