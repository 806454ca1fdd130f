"""Partitions and extremal cuts: k-section, Max-Cut, distance from bipartiteness."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from cmcuts import kernels
from cmcuts.graph import MultiGraph
from cmcuts.rng import make_rng, spawn_seeds
from cmcuts.structure import component_census, components

DEFAULT_EXACT_LIMIT = 22
DEFAULT_RESTARTS = 8


@dataclass(frozen=True, eq=False)
class Partition:
    """Block index in ``0..k-1`` for every vertex."""

    assignment: np.ndarray
    k: int

    def __post_init__(self):
        a = np.array(self.assignment, dtype=np.int64).ravel()
        if a.size and (a.min() < 0 or a.max() >= self.k):
            raise ValueError(f"block indices must lie in 0..{self.k - 1}")
        a.setflags(write=False)
        object.__setattr__(self, "assignment", a)

    @property
    def block_sizes(self) -> list[int]:
        return np.bincount(self.assignment, minlength=self.k).tolist()

    def blocks(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.assignment == b) for b in range(self.k)]


@dataclass(frozen=True)
class CutResult:
    width: int
    block_sizes: list[int]
    balanced: bool
    method: str
    conditions_met: bool


@dataclass(frozen=True)
class DistBipResult:
    """``per_component`` lists ``(component index, contribution, method)`` for every
    non-bipartite component; bipartite components contribute 0 and are omitted.
    Component indices follow :func:`cmcuts.structure.components`."""

    value: int
    exact: bool
    per_component: list[tuple[int, int, str]] = field(default_factory=list)


def _check_partition(g: MultiGraph, p: Partition) -> None:
    if len(p.assignment) != g.n:
        raise ValueError(f"partition covers {len(p.assignment)} vertices, graph has {g.n}")


def cut_width(g: MultiGraph, p: Partition) -> int:
    """Edges whose endpoints lie in different blocks; parallel edges each count, loops never."""
    _check_partition(g, p)
    a = p.assignment
    return int((a[g.edges[:, 0]] != a[g.edges[:, 1]]).sum())


def _result(g: MultiGraph, p: Partition, method: str, conditions: bool) -> CutResult:
    sizes = p.block_sizes
    return CutResult(cut_width(g, p), sizes, max(sizes) - min(sizes) <= 1, method, conditions)


def _targets(n: int, k: int) -> np.ndarray:
    return np.array([n // k + (1 if j < n % k else 0) for j in range(k)], dtype=np.int64)


def component_conditions(sizes, n: int, k: int) -> bool:
    """Component-size conditions under which a k-section of width <= k/2 exists.

    Needs (i) largest component <= n/k, (ii) a positive number s of components
    with at most 2 vertices, and (iii) every component beyond the k largest of
    size <= s/k (taking the small-component fraction r = s/n).
    """
    sizes = np.sort(np.asarray(sizes, dtype=np.int64))[::-1]
    if len(sizes) == 0:
        return False
    small = int((sizes <= 2).sum())
    if small == 0 or sizes[0] * k > n:
        return False
    return bool((sizes[k:] * k <= small).all())


def _level_order(g: MultiGraph, verts: np.ndarray) -> np.ndarray:
    indptr, indices = g.csr
    dist = kernels.bfs_levels(indptr, indices, verts[:1], -1)[verts]
    return verts[np.lexsort((verts, dist))]


def ksection_greedy(g: MultiGraph, k: int) -> tuple[Partition, CutResult]:
    """Balanced k-partition built from whole components.

    Components with more than two vertices go, largest first, into the
    lowest-index block that stays within n/k. Components of size 2 and then
    isolated vertices top the blocks up to sizes floor(n/k) or floor(n/k)+1;
    only the size-2 components that no longer fit whole get split. A component
    too large for any block is cut along BFS levels. ``conditions_met``
    reports :func:`component_conditions`.
    """
    n = g.n
    if k < 2:
        raise ValueError("k must be >= 2")
    if k > n:
        raise ValueError(f"k={k} exceeds the number of vertices {n}")
    cd = components(g)
    sizes = cd.sizes
    targets = _targets(n, k)
    cap = n // k
    load = np.zeros(k, dtype=np.int64)
    assign = np.full(n, -1, dtype=np.int64)

    overflow = []
    for i in np.flatnonzero(sizes > 2):
        c = sizes[i]
        fits = np.flatnonzero(load + c <= cap)
        if len(fits) == 0:
            overflow.append(i)
            continue
        j = fits[0]
        assign[cd.components[i]] = j
        load[j] += c

    for i in overflow:
        order = _level_order(g, cd.components[i])
        pos = 0
        while pos < len(order):
            j = int(np.argmax(targets - load))
            take = min(int(targets[j] - load[j]), len(order) - pos)
            assign[order[pos:pos + take]] = j
            load[j] += take
            pos += take

    twos = np.flatnonzero(sizes == 2)
    if len(twos):
        ecount = np.bincount(cd.component_id[g.edges[:, 0]], minlength=len(sizes))
        twos = twos[np.argsort(-ecount[twos], kind="stable")]
    split = []
    for i in twos:
        room = np.flatnonzero(targets - load >= 2)
        if len(room) == 0:
            split.append(i)
            continue
        assign[cd.components[i]] = room[0]
        load[room[0]] += 2
    rest = [v for i in np.flatnonzero(sizes == 1) for v in cd.components[i]]
    rest += [v for i in reversed(split) for v in cd.components[i]]
    for v in rest:
        j = np.flatnonzero(targets - load >= 1)[0]
        assign[v] = j
        load[j] += 1

    p = Partition(assign, k)
    ok = component_conditions(sizes, n, k) and not overflow
    return p, _result(g, p, "greedy", ok)


def _balanced_start(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    perm = rng.permutation(n)
    assign = np.empty(n, dtype=np.int64)
    assign[perm] = np.repeat(np.arange(k), _targets(n, k))
    return assign


def _swap_search_kway(g: MultiGraph, assign: np.ndarray, k: int, order: np.ndarray) -> np.ndarray:
    # O(n^2) per improving swap; meant for k > 2 on modest graphs
    indptr, nbr, wt = g.weighted_csr
    n = g.n
    assign = assign.copy()
    D = np.zeros((n, k), dtype=np.int64)
    for v in range(n):
        np.add.at(D[v], assign[nbr[indptr[v]:indptr[v + 1]]], wt[indptr[v]:indptr[v + 1]])
    idx = np.arange(n)
    improved = True
    while improved:
        improved = False
        for u in order:
            a = assign[u]
            b = assign
            gain = D[u, b] - D[u, a] + D[idx, a] - D[idx, b]
            lo, hi = indptr[u], indptr[u + 1]
            gain[nbr[lo:hi]] -= 2 * wt[lo:hi]
            gain[b == a] = 0
            v = int(np.argmax(gain))
            if gain[v] <= 0:
                continue
            bv = assign[v]
            for x, src, dst in ((u, a, bv), (v, bv, a)):
                lo, hi = indptr[x], indptr[x + 1]
                np.subtract.at(D[:, src], nbr[lo:hi], wt[lo:hi])
                np.add.at(D[:, dst], nbr[lo:hi], wt[lo:hi])
                assign[x] = dst
            improved = True
    return assign


def bisection_local_search(
    g: MultiGraph, k: int, seed, restarts: int = DEFAULT_RESTARTS
) -> tuple[Partition, CutResult]:
    """Balanced k-partition that no single swap of two vertices can improve.

    Each restart starts from a uniformly random balanced partition; the best
    width wins, ties going to the earliest restart.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    indptr, nbr, wt = g.weighted_csr
    best = None
    for s in spawn_seeds(seed, restarts):
        rng = make_rng(s)
        assign = _balanced_start(g.n, k, rng)
        order = rng.permutation(g.n)
        if k == 2:
            assign = kernels.bisect_swap(indptr, nbr, wt, assign.astype(np.int8), order).astype(np.int64)
        else:
            assign = _swap_search_kway(g, assign, k, order)
        p = Partition(assign, k)
        w = cut_width(g, p)
        if best is None or w < best[0]:
            best = (w, p)
    p = best[1]
    return p, _result(g, p, "local", component_conditions(components(g).sizes, g.n, k))


def bisection_exact(g: MultiGraph, exact_limit: int = DEFAULT_EXACT_LIMIT) -> tuple[Partition, CutResult]:
    """Minimum balanced bisection by enumeration of the blocks holding vertex 0."""
    n = g.n
    if n > exact_limit:
        raise ValueError(f"exact bisection limited to {exact_limit} vertices, graph has {n}")
    if n < 2:
        raise ValueError("need at least 2 vertices")
    e = g.edges[g.loop_mask == 0]
    best = None
    for half in sorted({n // 2, (n + 1) // 2}):
        for rest in combinations(range(1, n), half - 1):
            a = np.ones(n, dtype=np.int64)
            a[0] = 0
            a[list(rest)] = 0
            w = int((a[e[:, 0]] != a[e[:, 1]]).sum())
            if best is None or w < best[0]:
                best = (w, a)
    p = Partition(best[1], 2)
    return p, _result(g, p, "exact", component_conditions(components(g).sizes, n, 2))


def _cut_value(g: MultiGraph, side: np.ndarray) -> int:
    return int((side[g.edges[:, 0]] != side[g.edges[:, 1]]).sum())


def maxcut_local_search(g: MultiGraph, seed, restarts: int = DEFAULT_RESTARTS) -> tuple[Partition, int]:
    """Best 1-flip local optimum of the cut over random starts."""
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    indptr, nbr, wt = g.weighted_csr
    best = None
    for s in spawn_seeds(seed, restarts):
        rng = make_rng(s)
        side = rng.integers(0, 2, g.n).astype(np.int8)
        order = rng.permutation(g.n)
        side = kernels.maxcut_flip(indptr, nbr, wt, side, order).astype(np.int64)
        val = _cut_value(g, side)
        if best is None or val > best[0]:
            best = (val, side)
    return Partition(best[1], 2), best[0]


def maxcut_exact(g: MultiGraph) -> tuple[Partition, int]:
    """Exact Max-Cut by Gray-code enumeration; loops never count."""
    pairs, mult = g.multiplicities()
    best, mask = kernels.maxcut_exhaustive(g.n, pairs[:, 0], pairs[:, 1], mult)
    side = np.array([(mask >> i) & 1 for i in range(g.n)], dtype=np.int64)
    return Partition(side, 2), int(best)


def distbip(g: MultiGraph, exact_limit: int = DEFAULT_EXACT_LIMIT, seed=None,
            restarts: int = DEFAULT_RESTARTS) -> DistBipResult:
    """Minimum number of edge deletions that make ``g`` bipartite.

    Per component: bipartite gives 0, a unicyclic component with an odd cycle
    gives 1, any other component with at most ``exact_limit`` vertices is
    solved exactly, and larger ones get the Max-Cut local-search bound (the
    result is then flagged inexact). ``seed`` is needed only in that last case.
    """
    if exact_limit < 1:
        raise ValueError("exact_limit must be >= 1")
    vcount, ecount, nonbip, labels = component_census(g)
    bad = np.flatnonzero(nonbip)
    if len(bad) == 0:
        return DistBipResult(0, True, [])
    cid = components(g).component_id
    first = np.full(len(vcount), g.n, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(g.n))

    total = 0
    exact = True
    per = []
    for lab in bad:
        idx = int(cid[first[lab]])
        if ecount[lab] == vcount[lab]:
            contrib, method = 1, "odd_unicycle"
        else:
            sub, _ = g.subgraph(np.flatnonzero(labels == lab))
            if sub.n <= exact_limit:
                _, mc = maxcut_exact(sub)
                contrib, method = sub.m - mc, "exhaustive"
            else:
                _, mc = maxcut_local_search(sub, make_rng(seed), restarts)
                contrib, method = sub.m - mc, "local_search"
                exact = False
        total += contrib
        per.append((idx, int(contrib), method))
    per.sort()
    return DistBipResult(int(total), exact, per)


def verify_eps_delta_cut(g: MultiGraph, component, p: Partition, eps: float, delta: float) -> bool:
    """Whether ``p`` splits the component into two sides each larger than eps|V|
    with at most delta|V| edges between them. Any eps >= 1/2 simply yields False."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if delta <= 0:
        raise ValueError("delta must be positive")
    if p.k != 2:
        raise ValueError("expected a two-block partition")
    _check_partition(g, p)
    comp = np.unique(np.asarray(component, dtype=np.int64))
    side = p.assignment[comp]
    n1 = int((side == 0).sum())
    n2 = len(comp) - n1
    if n1 == 0 or n2 == 0:
        raise ValueError("both blocks must be nonempty")
    inside = np.zeros(g.n, dtype=bool)
    inside[comp] = True
    e = g.edges[inside[g.edges[:, 0]] & inside[g.edges[:, 1]]]
    cross = int((p.assignment[e[:, 0]] != p.assignment[e[:, 1]]).sum())
    size = len(comp)
    return n1 > eps * size and n2 > eps * size and cross <= delta * size
