"""Ground-truth matching routines.

All of these read the full edge set directly and never touch the probe
counters: they exist to check the sublinear oracles, not to compete with them.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import SizeCapExceeded
from .graph import EdgePermutation

FREE = -1


@dataclass
class ExactMatching:
    mate: list[int]

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(v, u) for v, u in enumerate(self.mate) if u > v]

    @property
    def size(self) -> int:
        return sum(1 for v, u in enumerate(self.mate) if u > v)


def _edges_of(g) -> tuple[int, list[tuple[int, int]]]:
    if isinstance(g, tuple):
        return g[0], list(g[1])
    return g.n, g.edge_list()


def adjacency_lists(n: int, edges: Iterable[tuple[int, int]]) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return adj


def mate_array(n: int, edges: Iterable[tuple[int, int]]) -> list[int]:
    mate = [FREE] * n
    for u, v in edges:
        if mate[u] != FREE or mate[v] != FREE:
            raise ValueError(f"not a matching at {(u, v)}")
        mate[u], mate[v] = v, u
    return mate


def is_matching(edges: Iterable[tuple[int, int]], g=None) -> bool:
    seen = set()
    for u, v in edges:
        if u == v or u in seen or v in seen:
            return False
        if g is not None and not g.has_edge(u, v):
            return False
        seen.add(u)
        seen.add(v)
    return True


def greedy_maximal(n: int, edges: Iterable[tuple[int, int]]) -> list[int]:
    mate = [FREE] * n
    for u, v in edges:
        if mate[u] == FREE and mate[v] == FREE:
            mate[u], mate[v] = v, u
    return mate


def two_coloring(n: int, adj: list[list[int]]) -> list[int] | None:
    color = [-1] * n
    for s in range(n):
        if color[s] != -1:
            continue
        color[s] = 0
        q = deque([s])
        while q:
            v = q.popleft()
            for w in adj[v]:
                if color[w] == -1:
                    color[w] = 1 - color[v]
                    q.append(w)
                elif color[w] == color[v]:
                    return None
    return color


def hopcroft_karp(n: int, adj: list[list[int]], left: Sequence[bool]) -> list[int]:
    """Maximum matching of a bipartite graph given the left side indicator."""
    mate = [FREE] * n
    lefts = [v for v in range(n) if left[v]]
    for u in lefts:                      # greedy warm start
        for w in adj[u]:
            if mate[w] == FREE:
                mate[u], mate[w] = w, u
                break
    inf = math.inf
    while True:
        dist = {}
        q = deque()
        for u in lefts:
            if mate[u] == FREE:
                dist[u] = 0
                q.append(u)
        found = inf
        while q:
            u = q.popleft()
            if dist[u] >= found:
                continue
            for w in adj[u]:
                x = mate[w]
                if x == FREE:
                    found = min(found, dist[u] + 1)
                elif x not in dist:
                    dist[x] = dist[u] + 1
                    q.append(x)
        if found is inf:
            return mate
        # layered DFS, iterative
        it = {u: 0 for u in dist}
        for root in lefts:
            if mate[root] != FREE or dist.get(root) != 0:
                continue
            stack = [root]
            via: list[int] = []
            while stack:
                u = stack[-1]
                nbrs = adj[u]
                advanced = False
                while it[u] < len(nbrs):
                    w = nbrs[it[u]]
                    it[u] += 1
                    x = mate[w]
                    if x == FREE:
                        if dist[u] + 1 == found:
                            via.append(w)
                            # augment along stack/via
                            for a, b in zip(stack, via):
                                mate[a], mate[b] = b, a
                            stack = []
                            advanced = True
                            break
                    elif dist.get(x) == dist[u] + 1:
                        via.append(w)
                        stack.append(x)
                        advanced = True
                        break
                if not stack:
                    break
                if not advanced:
                    dist[u] = inf            # dead end for this phase
                    stack.pop()
                    if via:
                        via.pop()


class _Blossom:
    """Edmonds' single-root alternating search with blossom contraction."""

    def __init__(self, n: int, adj: list[list[int]], mate: list[int]):
        self.n = n
        self.adj = adj
        self.mate = mate

    def _lca(self, a, b, base, parent):
        seen = [False] * self.n
        mate = self.mate
        while True:
            a = base[a]
            seen[a] = True
            if mate[a] == FREE:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[mate[b]]

    def _mark(self, v, b, child, base, parent, blossom):
        mate = self.mate
        while base[v] != b:
            blossom[base[v]] = blossom[base[mate[v]]] = True
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    def search(self, root: int, limit: float = math.inf) -> bool:
        """Augment along one alternating path from ``root``; depth-bounded when
        ``limit`` is finite (outer vertices deeper than limit-1 are not expanded)."""
        n, adj, mate = self.n, self.adj, self.mate
        used = [False] * n
        parent = [FREE] * n
        base = list(range(n))
        depth = [0] * n
        used[root] = True
        q = deque([root])
        while q:
            v = q.popleft()
            if depth[v] + 1 > limit:
                continue
            for to in adj[v]:
                if base[v] == base[to] or mate[v] == to:
                    continue
                if to == root or (mate[to] != FREE and parent[mate[to]] != FREE):
                    cur = self._lca(v, to, base, parent)
                    blossom = [False] * n
                    self._mark(v, cur, to, base, parent, blossom)
                    self._mark(to, cur, v, base, parent, blossom)
                    d = min(depth[v], depth[to]) + 1
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                depth[i] = d
                                q.append(i)
                elif parent[to] == FREE:
                    parent[to] = v
                    if mate[to] == FREE:
                        self._augment(to, parent)
                        return True
                    nxt = mate[to]
                    used[nxt] = True
                    depth[nxt] = depth[v] + 2
                    q.append(nxt)
        return False

    def _augment(self, v, parent):
        mate = self.mate
        while v != FREE:
            pv = parent[v]
            ppv = mate[pv]
            mate[v], mate[pv] = pv, v
            v = ppv


def max_matching_exact(g, cap: int = 4096) -> ExactMatching:
    n, edges = _edges_of(g)
    if n > cap:
        raise SizeCapExceeded(f"n={n} exceeds cap {cap}")
    adj = adjacency_lists(n, edges)
    color = two_coloring(n, adj)
    if color is not None:
        return ExactMatching(hopcroft_karp(n, adj, [c == 0 for c in color]))
    mate = greedy_maximal(n, edges)
    solver = _Blossom(n, adj, mate)
    for r in range(n):
        if mate[r] == FREE:
            solver.search(r)
    return ExactMatching(mate)


def matching_number(g) -> int:
    return max_matching_exact(g).size


def gmm_reference(g, pi: EdgePermutation) -> list[tuple[int, int]]:
    """Greedy maximal matching scanning edges in increasing rank."""
    n, edges = _edges_of(g)
    mate = greedy_maximal(n, sorted(edges, key=lambda e: pi.rank(*e)))
    return [(v, u) for v, u in enumerate(mate) if u > v]


def static_approx_steps(g, eps: float, initial: Iterable[tuple[int, int]] | None = None):
    """Resumable form of ``static_approx_matching``.

    Yields the cost of each step (edges scanned by the greedy pass, or one
    per alternating search) and returns the matching.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    n, edges = _edges_of(g)
    limit = 2 * math.ceil(1 / eps) - 1
    mate = mate_array(n, initial) if initial is not None else [FREE] * n
    for lo in range(0, len(edges), 256):
        for u, v in edges[lo:lo + 256]:
            if mate[u] == FREE and mate[v] == FREE:
                mate[u], mate[v] = v, u
        yield 1
    adj = adjacency_lists(n, edges)
    solver = _Blossom(n, adj, mate)
    if limit > 1:
        improved = True
        while improved:
            improved = False
            for r in range(n):
                if mate[r] == FREE and adj[r]:
                    if solver.search(r, limit):
                        improved = True
                    yield 1
    return [(v, u) for v, u in enumerate(mate) if u > v]


def static_approx_matching(g, eps: float, initial: Iterable[tuple[int, int]] | None = None
                           ) -> list[tuple[int, int]]:
    """(1+eps)-approximate matching by removing short augmenting paths.

    Starts from a greedy maximal matching (or ``initial``) and repeats passes
    of depth-bounded alternating searches until a pass finds nothing.
    """
    return drain(static_approx_steps(g, eps, initial))


def drain(steps):
    """Run a step generator to completion and return its value."""
    while True:
        try:
            next(steps)
        except StopIteration as stop:
            return stop.value


def count_disjoint_short_aug_paths(g, matching, k: int) -> int:
    """Size of a greedily built family of vertex-disjoint augmenting paths
    with exactly 2k+1 edges."""
    n, edges = _edges_of(g)
    adj = adjacency_lists(n, edges)
    if isinstance(matching, ExactMatching):
        mate = list(matching.mate)
    else:
        mate = mate_array(n, matching)
    used = [False] * n
    count = 0

    def extend(path, on_path):
        v = path[-1]
        steps = len(path) - 1          # edges so far; next edge is non-matching
        for w in adj[v]:
            if used[w] or w in on_path or mate[v] == w:
                continue
            if steps == 2 * k:
                if mate[w] == FREE:
                    return path + [w]
                continue
            x = mate[w]
            if x == FREE or used[x] or x in on_path:
                continue
            on_path.update((w, x))
            got = extend(path + [w, x], on_path)
            if got:
                return got
            on_path.difference_update((w, x))
        return None

    for a in range(n):
        if used[a] or mate[a] != FREE:
            continue
        p = extend([a], {a})
        if p:
            count += 1
            for x in p:
                used[x] = True
    return count
