"""Structural decompositions and counts on configuration-model multigraphs."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from cmcuts import kernels
from cmcuts.graph import MultiGraph

DEFAULT_CYCLE_CAP = 12


class NoCoreError(ValueError):
    """The component (or the largest component) has an empty 2-core."""


class CycleLimitError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ComponentDecomposition:
    """Components sorted by size (descending), ties by smallest vertex.

    ``component_id[v]`` indexes into ``components``.
    """

    components: list[np.ndarray]
    component_id: np.ndarray

    @property
    def sizes(self) -> np.ndarray:
        return np.fromiter((len(c) for c in self.components), dtype=np.int64, count=len(self.components))

    @property
    def n(self) -> int:
        return len(self.component_id)

    def largest(self) -> np.ndarray:
        return self.components[0] if self.components else np.empty(0, dtype=np.int64)


@dataclass(frozen=True)
class HangingTree:
    root: int
    attachment: int
    vertices: np.ndarray = field(repr=False)
    depth: int

    @property
    def size(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True, eq=False)
class CoreDecomposition:
    component: np.ndarray
    core_vertices: np.ndarray
    hanging_trees: list[HangingTree]
    depth: np.ndarray  # distance to the core for every component vertex (0 on the core)

    def tree_sizes(self) -> np.ndarray:
        return np.fromiter((t.size for t in self.hanging_trees), dtype=np.int64, count=len(self.hanging_trees))


@dataclass(frozen=True)
class CycleCensus:
    """``counts[k-1]`` is the number of cycles of length k.

    Length 1 is a loop; length 2 is an unordered pair of parallel edges (a
    triple edge gives three). From length 3 on, a cycle is a cyclic vertex
    sequence together with a choice of one edge per consecutive pair.
    """

    counts: tuple[int, ...]

    def __getitem__(self, k: int) -> int:
        return self.counts[k - 1]

    @property
    def K(self) -> int:
        return len(self.counts)

    def odd_total(self) -> int:
        return sum(self.counts[k - 1] for k in range(1, self.K + 1, 2))


@dataclass(frozen=True)
class OddCycleCensus:
    bipartite: bool
    excess: int
    unicyclic: bool
    odd_unicycle: bool


def _labels(g: MultiGraph) -> tuple[int, np.ndarray]:
    u, v = g.edges[:, 0], g.edges[:, 1]
    adj = coo_matrix((np.ones(g.m, dtype=np.int8), (u, v)), shape=(g.n, g.n)).tocsr()
    return connected_components(adj, directed=False)


def components(g: MultiGraph) -> ComponentDecomposition:
    if g.n == 0:
        return ComponentDecomposition([], np.empty(0, dtype=np.int64))
    ncomp, labels = _labels(g)
    sizes = np.bincount(labels, minlength=ncomp)
    first = np.full(ncomp, g.n, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(g.n))
    rank = np.lexsort((first, -sizes))
    new_id = np.empty(ncomp, dtype=np.int64)
    new_id[rank] = np.arange(ncomp)
    cid = new_id[labels]
    by_comp = np.argsort(cid, kind="stable")
    bounds = np.cumsum(sizes[rank])[:-1]
    comps = np.split(by_comp, bounds)
    return ComponentDecomposition(comps, cid)


def largest_component(g: MultiGraph) -> np.ndarray:
    """Vertices of the largest component (smallest-vertex tie-break), without building the rest."""
    if g.n == 0:
        return np.empty(0, dtype=np.int64)
    ncomp, labels = _labels(g)
    sizes = np.bincount(labels, minlength=ncomp)
    best = sizes.max()
    cand = np.flatnonzero(sizes == best)
    if len(cand) > 1:
        first = np.full(ncomp, g.n, dtype=np.int64)
        np.minimum.at(first, labels, np.arange(g.n))
        lab = cand[np.argmin(first[cand])]
    else:
        lab = cand[0]
    return np.flatnonzero(labels == lab)


def giant_fraction(g: MultiGraph) -> float:
    return len(largest_component(g)) / g.n if g.n else 0.0


def k_core(g: MultiGraph, k: int) -> np.ndarray:
    """Vertices left after repeatedly deleting those of degree < k (loops count 2)."""
    indptr, indices = g.csr
    mask = kernels.peel_core(indptr, indices, int(k))
    return np.flatnonzero(mask)


def neighborhood(g: MultiGraph, U, r: int) -> np.ndarray:
    """All vertices within graph distance ``r`` of the set ``U``."""
    if r < 0:
        raise ValueError("r must be >= 0")
    U = np.unique(np.asarray(list(U) if not isinstance(U, np.ndarray) else U, dtype=np.int64))
    if r == 0 or len(U) == 0:
        return U
    indptr, indices = g.csr
    dist = kernels.bfs_levels(indptr, indices, U, int(r))
    return np.flatnonzero(dist >= 0)


def two_core_decomposition(g: MultiGraph, component) -> CoreDecomposition:
    """2-core of a connected component plus the trees hanging from it.

    Each tree is rooted at its unique vertex adjacent to the core (depth 1);
    ``attachment`` is that core neighbour.
    """
    comp = np.unique(np.asarray(component, dtype=np.int64))
    in_comp = np.zeros(g.n, dtype=bool)
    in_comp[comp] = True
    core_all = k_core(g, 2)
    core = core_all[in_comp[core_all]]
    if len(core) == 0:
        raise NoCoreError("component is acyclic; its 2-core is empty")

    indptr, indices = g.csr
    dist = kernels.bfs_levels(indptr, indices, core, -1)
    depth = dist[comp]
    if (depth < 0).any():
        raise ValueError("vertex set is not connected")

    off = comp[depth > 0]
    trees: list[HangingTree] = []
    if len(off):
        is_off = np.zeros(g.n, dtype=bool)
        is_off[off] = True
        e = g.edges
        sel = is_off[e[:, 0]] & is_off[e[:, 1]]
        sub = coo_matrix(
            (np.ones(int(sel.sum()), dtype=np.int8), (e[sel, 0], e[sel, 1])), shape=(g.n, g.n)
        ).tocsr()
        _, lab = connected_components(sub, directed=False)
        lab_off = lab[off]
        order = np.argsort(lab_off, kind="stable")
        groups = np.split(off[order], np.flatnonzero(np.diff(lab_off[order])) + 1)
        is_core = np.zeros(g.n, dtype=bool)
        is_core[core] = True
        for verts in groups:
            root = int(verts[np.argmin(dist[verts])])
            nb = indices[indptr[root]:indptr[root + 1]]
            attach = int(nb[is_core[nb]][0])
            trees.append(HangingTree(root, attach, verts, int(dist[verts].max())))
        trees.sort(key=lambda t: t.root)
    return CoreDecomposition(comp, core, trees, depth)


def count_pairs(g: MultiGraph) -> int:
    """Components made of two degree-one vertices joined by a single edge."""
    e = g.edges
    deg = g.degrees
    return int(((e[:, 0] != e[:, 1]) & (deg[e[:, 0]] == 1) & (deg[e[:, 1]] == 1)).sum())


def count_cycles(g: MultiGraph, K: int, cap: int = DEFAULT_CYCLE_CAP) -> CycleCensus:
    if K < 1:
        raise ValueError("K must be >= 1")
    if K > cap:
        raise CycleLimitError(f"K={K} exceeds the cycle-length cap {cap}; pass a larger cap to override")
    counts = [g.n_loops]
    if K >= 2:
        _, mult = g.multiplicities()
        counts.append(int((mult * (mult - 1) // 2).sum()))
    if K >= 3:
        indptr, nbr, wt = g.weighted_csr
        longer = kernels.count_cycles(indptr, nbr, wt, int(K))
        counts.extend(int(c) for c in longer[3:])
    return CycleCensus(tuple(counts))


def odd_cycle_census(g: MultiGraph, component) -> OddCycleCensus:
    comp = np.unique(np.asarray(component, dtype=np.int64))
    sub, _ = g.subgraph(comp)
    indptr, indices = sub.csr
    _, labels, nonbip = kernels.two_color(indptr, indices)
    if len(nonbip) != 1 and sub.n > 0:
        raise ValueError("vertex set is not connected")
    bipartite = not bool(nonbip[0]) if sub.n else True
    excess = sub.m - sub.n + 1
    unicyclic = excess == 1
    return OddCycleCensus(bipartite, excess, unicyclic, unicyclic and not bipartite)


def component_census(g: MultiGraph) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Per-component (label order of :func:`kernels.two_color`): vertex counts,
    edge counts, non-bipartite flags, and the per-vertex label."""
    indptr, indices = g.csr
    _, labels, nonbip = kernels.two_color(indptr, indices)
    nc = len(nonbip)
    vcount = np.bincount(labels, minlength=nc)
    ecount = np.bincount(labels[g.edges[:, 0]], minlength=nc) if g.m else np.zeros(nc, dtype=np.int64)
    return vcount, ecount, nonbip.astype(bool), labels


def intermediate_mass(cd: ComponentDecomposition, L: int) -> int:
    """Total size of non-largest components with at least L vertices."""
    if L < 1:
        raise ValueError("L must be >= 1")
    sizes = cd.sizes[1:]
    return int(sizes[sizes >= L].sum())


def largest_core(g: MultiGraph) -> np.ndarray:
    giant = largest_component(g)
    core = k_core(g, 2)
    in_giant = np.zeros(g.n, dtype=bool)
    in_giant[giant] = True
    return core[in_giant[core]]


def measure_tc_r(g: MultiGraph, r: int) -> float:
    """Fraction of vertices within distance r of the 2-core of the largest component."""
    if r < 0:
        raise ValueError("r must be >= 0")
    core = largest_core(g)
    if len(core) == 0:
        raise NoCoreError("largest component is acyclic")
    return len(neighborhood(g, core, r)) / g.n


def tc_r_curve(g: MultiGraph, r_max: int) -> list[float]:
    """``measure_tc_r`` for r = 0..r_max from a single BFS."""
    core = largest_core(g)
    if len(core) == 0:
        raise NoCoreError("largest component is acyclic")
    indptr, indices = g.csr
    dist = kernels.bfs_levels(indptr, indices, core, int(r_max))
    hist = np.bincount(dist[dist >= 0], minlength=r_max + 1)
    return (np.cumsum(hist)[: r_max + 1] / g.n).tolist()


def core_degree_histogram(cd: CoreDecomposition, g: MultiGraph) -> dict[int, int]:
    """Number of core vertices per degree inside the core subgraph."""
    in_core = np.zeros(g.n, dtype=bool)
    in_core[cd.core_vertices] = True
    e = g.edges
    sel = in_core[e[:, 0]] & in_core[e[:, 1]]
    deg = np.bincount(e[sel].ravel(), minlength=g.n)[cd.core_vertices]
    return dict(sorted(Counter(int(d) for d in deg).items()))


def max_degree_check(seq) -> tuple[int, bool]:
    """``(d_max, d_max**2 <= n)``; a sanity warning, never an error."""
    degrees = np.asarray(getattr(seq, "degrees", seq), dtype=np.int64)
    if degrees.size == 0:
        return 0, True
    d_max = int(degrees.max())
    return d_max, d_max * d_max <= len(degrees)
