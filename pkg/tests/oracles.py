"""Brute-force reference implementations, deliberately naive and independent
of the package internals. Graphs are (n, list of (u, v)) pairs."""

from itertools import combinations, product

import numpy as np


def random_multigraph(rng, n_max, m_factor=2.0, n_min=1):
    n = int(rng.integers(n_min, n_max + 1))
    m = int(rng.integers(0, int(m_factor * n) + 1))
    return n, [tuple(int(x) for x in rng.integers(0, n, 2)) for _ in range(m)]


def cycles(n, edges, K):
    """Counts of cycles of length 1..K as edge subsets forming one simple cycle."""
    counts = [0] * K
    ids = range(len(edges))
    for k in range(1, K + 1):
        for sub in combinations(ids, k):
            es = [edges[i] for i in sub]
            if k == 1:
                counts[0] += es[0][0] == es[0][1]
                continue
            if any(u == v for u, v in es):
                continue
            deg = {}
            for u, v in es:
                deg[u] = deg.get(u, 0) + 1
                deg[v] = deg.get(v, 0) + 1
            if len(deg) != k or any(d != 2 for d in deg.values()):
                continue
            # connected?
            seen, stack = set(), [es[0][0]]
            while stack:
                x = stack.pop()
                if x in seen:
                    continue
                seen.add(x)
                stack.extend(v if u == x else u for u, v in es if x in (u, v))
            counts[k - 1] += len(seen) == k
    return counts


def cut(edges, side):
    return sum(side[u] != side[v] for u, v in edges)


def maxcut(n, edges):
    return max(cut(edges, s) for s in product((0, 1), repeat=n))


def min_balanced_cut(n, edges, k=2):
    lo = n // k
    best = None
    for s in product(range(k), repeat=n):
        sizes = [s.count(b) for b in range(k)]
        if min(sizes) < lo or max(sizes) > lo + (n % k > 0):
            continue
        w = cut(edges, s)
        best = w if best is None else min(best, w)
    return best


def is_bipartite(n, edges):
    for s in product((0, 1), repeat=n):
        if all(s[u] != s[v] for u, v in edges):
            return True
    return False


def components(n, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    groups = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values(), key=lambda c: (-len(c), c[0]))


def core(n, edges, k):
    alive = set(range(n))
    while True:
        deg = {v: 0 for v in alive}
        for u, v in edges:
            if u in alive and v in alive:
                deg[u] += 1
                deg[v] += 1
        drop = {v for v, d in deg.items() if d < k}
        if not drop:
            return sorted(alive)
        alive -= drop


def as_array(edges):
    return np.array(edges, dtype=np.int64).reshape(-1, 2)
