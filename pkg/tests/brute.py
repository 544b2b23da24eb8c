"""Brute-force reference oracles, independent of the package's solvers."""

from itertools import combinations


def all_matchings(edges):
    edges = sorted(tuple(sorted(e)) for e in edges)
    out = [()]

    def rec(i, used, chosen):
        for j in range(i, len(edges)):
            u, v = edges[j]
            if u in used or v in used:
                continue
            nxt = chosen + (edges[j],)
            out.append(nxt)
            rec(j + 1, used | {u, v}, nxt)

    rec(0, frozenset(), ())
    return out


def mu(edges):
    return max(len(m) for m in all_matchings(edges))


def maximal_matchings(edges):
    edges = [tuple(sorted(e)) for e in edges]
    res = []
    for m in all_matchings(edges):
        used = {x for e in m for x in e}
        if all(u in used or v in used for u, v in edges):
            res.append(m)
    return res


def greedy_by_rank(edges, key):
    """Pick the lowest-ranked remaining edge whose endpoints are both free."""
    left = {tuple(sorted(e)) for e in edges}
    used, chosen = set(), set()
    while True:
        free = [e for e in left if e[0] not in used and e[1] not in used]
        if not free:
            return chosen
        e = min(free, key=lambda x: key(*x))
        chosen.add(e)
        used.update(e)
        left.discard(e)


def is_valid_matching(edges, adj_edges):
    seen = set()
    adj = {tuple(sorted(e)) for e in adj_edges}
    for u, v in edges:
        if u in seen or v in seen or tuple(sorted((u, v))) not in adj:
            return False
        seen.update((u, v))
    return True


def short_aug_paths(n, edges, matching, length):
    """All augmenting paths with exactly ``length`` edges, as vertex tuples."""
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    mate = {}
    for u, v in matching:
        mate[u], mate[v] = v, u
    found = []

    def rec(path):
        v = path[-1]
        steps = len(path) - 1
        if steps == length:
            if path[-1] not in mate and path[0] < path[-1]:
                found.append(tuple(path))
            return
        if steps % 2 == 0:
            nxt = [w for w in adj[v] if mate.get(v) != w and w not in path]
        else:
            nxt = [mate[v]] if v in mate and mate[v] not in path else []
        for w in nxt:
            rec(path + [w])

    for a in range(n):
        if a not in mate:
            rec([a])
    return found


def max_disjoint(paths):
    best = 0
    for r in range(len(paths), 0, -1):
        for combo in combinations(paths, r):
            vs = [x for p in combo for x in p]
            if len(vs) == len(set(vs)):
                return r
    return best
