"""Immutable half-edge multigraph plus the edge-list text format.

Vertices are ``0 .. n-1`` in memory. The edge-list file is 1-based::

    n m
    u v        # one line per edge; a loop is "u u", parallel edges repeat
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np


@dataclass(frozen=True, eq=False)
class MultiGraph:
    """Multigraph on ``n`` vertices with an ``(m, 2)`` edge array.

    Loops and parallel edges are ordinary edges. A loop adds 2 to the degree
    of its vertex, so ``degrees.sum() == 2 * m`` always.
    """

    n: int
    edges: np.ndarray

    def __post_init__(self):
        e = np.array(self.edges, dtype=np.int64).reshape(-1, 2)
        if self.n < 0:
            raise ValueError("n must be >= 0")
        if e.size and (e.min() < 0 or e.max() >= self.n):
            raise ValueError("edge endpoint out of range")
        e.setflags(write=False)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "edges", e)

    @classmethod
    def from_edges(cls, n, edges) -> "MultiGraph":
        return cls(n, np.asarray(list(edges), dtype=np.int64).reshape(-1, 2))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def degrees(self) -> np.ndarray:
        d = np.bincount(self.edges.ravel(), minlength=self.n).astype(np.int64)
        d.setflags(write=False)
        return d

    @cached_property
    def loop_mask(self) -> np.ndarray:
        return self.edges[:, 0] == self.edges[:, 1]

    @property
    def n_loops(self) -> int:
        return int(self.loop_mask.sum())

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Full multigraph adjacency ``(indptr, indices)``; row lengths equal degrees."""
        u, v = self.edges[:, 0], self.edges[:, 1]
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        order = np.argsort(src, kind="stable")
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=self.n), out=indptr[1:])
        return indptr, np.ascontiguousarray(dst[order], dtype=np.int64)

    @cached_property
    def _pairs(self) -> tuple[np.ndarray, np.ndarray]:
        keep = ~self.loop_mask
        a = np.minimum(self.edges[keep, 0], self.edges[keep, 1])
        b = np.maximum(self.edges[keep, 0], self.edges[keep, 1])
        keys, mult = np.unique(a * max(self.n, 1) + b, return_counts=True)
        pairs = np.stack([keys // max(self.n, 1), keys % max(self.n, 1)], axis=1).astype(np.int64)
        return pairs.reshape(-1, 2), mult.astype(np.int64)

    @cached_property
    def weighted_csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Loopless simple adjacency ``(indptr, nbr, weight)``; weight = edge multiplicity."""
        pairs, mult = self._pairs
        src = np.concatenate([pairs[:, 0], pairs[:, 1]])
        dst = np.concatenate([pairs[:, 1], pairs[:, 0]])
        w = np.concatenate([mult, mult])
        order = np.lexsort((dst, src))
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=self.n), out=indptr[1:])
        return (
            indptr,
            np.ascontiguousarray(dst[order], dtype=np.int64),
            np.ascontiguousarray(w[order], dtype=np.int64),
        )

    def multiplicities(self) -> tuple[np.ndarray, np.ndarray]:
        """Distinct non-loop pairs ``(k, 2)`` with ``u < v`` and their multiplicities."""
        return self._pairs

    def is_simple(self) -> bool:
        if self.n_loops:
            return False
        _, mult = self.multiplicities()
        return not (mult > 1).any()

    def canonical_edges(self) -> np.ndarray:
        """Edges with ``u <= v``, sorted lexicographically; equal for equal multisets."""
        e = np.sort(self.edges, axis=1)
        return e[np.lexsort((e[:, 1], e[:, 0]))]

    def same_as(self, other: "MultiGraph") -> bool:
        return self.n == other.n and np.array_equal(self.canonical_edges(), other.canonical_edges())

    def subgraph(self, vertices) -> tuple["MultiGraph", np.ndarray]:
        """Induced subgraph relabelled to ``0..k-1``; also returns the old labels."""
        vertices = np.asarray(sorted(set(int(v) for v in vertices)), dtype=np.int64)
        relabel = np.full(self.n, -1, dtype=np.int64)
        relabel[vertices] = np.arange(len(vertices))
        e = relabel[self.edges]
        e = e[(e >= 0).all(axis=1)] if len(e) else e
        return MultiGraph(len(vertices), e), vertices

    def __repr__(self):
        return f"MultiGraph(n={self.n}, m={self.m})"


def format_edgelist(g: MultiGraph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u + 1} {v + 1}" for u, v in g.edges.tolist())
    return "\n".join(lines) + "\n"


def parse_edgelist(text: str) -> MultiGraph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise ValueError("edge list must start with a 'n m' header")
    n, m = int(rows[0][0]), int(rows[0][1])
    body = rows[1:]
    if len(body) != m:
        raise ValueError(f"header announces {m} edges, found {len(body)}")
    edges = np.empty((m, 2), dtype=np.int64)
    for i, r in enumerate(body):
        if len(r) != 2:
            raise ValueError(f"edge line {i + 2}: expected 'u v'")
        u, v = int(r[0]), int(r[1])
        if not (1 <= u <= n and 1 <= v <= n):
            raise ValueError(f"edge line {i + 2}: vertex out of range 1..{n}")
        edges[i] = (u - 1, v - 1)
    return MultiGraph(n, edges)


def write_edgelist(g: MultiGraph, path) -> None:
    Path(path).write_text(format_edgelist(g))


def read_edgelist(path) -> MultiGraph:
    return parse_edgelist(Path(path).read_text())
