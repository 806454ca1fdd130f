"""Pure-Python implementations of the hot graph kernels.

Every function here has a twin in ``_ckernels.pyx`` with the same signature
and the same visiting order, so both backends return identical results for
identical inputs (ties included).

Adjacency arguments are CSR arrays. ``indptr``/``indices`` is the full
multigraph adjacency (a loop at v lists v twice, parallel edges repeat);
``indptr``/``nbr``/``wt`` is the weighted simple adjacency with loops dropped
and parallel edges collapsed into integer weights.
"""

from __future__ import annotations

import numpy as np


def peel_core(indptr, indices, k):
    n = len(indptr) - 1
    deg = np.diff(indptr).astype(np.int64)
    removed = np.zeros(n, dtype=np.uint8)
    stack = []
    for v in range(n):
        if deg[v] < k:
            removed[v] = 1
            stack.append(v)
    while stack:
        v = stack.pop()
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            if removed[u]:
                continue
            deg[u] -= 1
            if deg[u] < k:
                removed[u] = 1
                stack.append(u)
    return (1 - removed).astype(np.uint8)


def bfs_levels(indptr, indices, sources, max_depth):
    """Multi-source BFS distances; -1 marks unreached, max_depth < 0 is unbounded."""
    n = len(indptr) - 1
    dist = np.full(n, -1, dtype=np.int64)
    queue = []
    for s in sources:
        if dist[s] < 0:
            dist[s] = 0
            queue.append(s)
    head = 0
    while head < len(queue):
        v = queue[head]
        head += 1
        dv = dist[v]
        if 0 <= max_depth <= dv:
            continue
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            if dist[u] < 0:
                dist[u] = dv + 1
                queue.append(u)
    return dist


def two_color(indptr, indices):
    """BFS 2-colouring of every component.

    Returns ``(color, comp, nonbip)``: a colour per vertex, a component label
    per vertex (labels in order of smallest vertex), and a 0/1 flag per label
    marking components with an odd closed walk (loops included).
    """
    n = len(indptr) - 1
    color = np.full(n, -1, dtype=np.int8)
    comp = np.full(n, -1, dtype=np.int64)
    flags = []
    queue = np.empty(n, dtype=np.int64)
    for s in range(n):
        if comp[s] >= 0:
            continue
        label = len(flags)
        bad = 0
        comp[s] = label
        color[s] = 0
        queue[0] = s
        head, tail = 0, 1
        while head < tail:
            v = queue[head]
            head += 1
            for j in range(indptr[v], indptr[v + 1]):
                u = indices[j]
                if comp[u] < 0:
                    comp[u] = label
                    color[u] = 1 - color[v]
                    queue[tail] = u
                    tail += 1
                elif color[u] == color[v]:
                    bad = 1
        flags.append(bad)
    return color, comp, np.asarray(flags, dtype=np.uint8)


def count_cycles(indptr, nbr, wt, K):
    """Weighted counts of vertex-simple cycles of length 3..K.

    Each cycle is found from its smallest vertex in both orientations, so the
    raw totals are halved. The weight of a cycle is the product of the edge
    multiplicities along it.
    """
    n = len(indptr) - 1
    counts = [0] * (K + 1)
    on_path = np.zeros(n, dtype=np.uint8)

    def extend(s, v, length, weight):
        for j in range(indptr[v], indptr[v + 1]):
            u = nbr[j]
            if u == s:
                if length >= 3:
                    counts[length] += weight * int(wt[j])
            elif u > s and not on_path[u] and length < K:
                on_path[u] = 1
                extend(s, u, length + 1, weight * int(wt[j]))
                on_path[u] = 0

    for s in range(n):
        on_path[s] = 1
        extend(s, s, 1, 1)
        on_path[s] = 0
    return np.asarray([c // 2 for c in counts], dtype=np.int64)


def _move_gain(indptr, nbr, wt, side, v):
    # cut reduction from moving v alone to the other side
    g = 0
    sv = side[v]
    for j in range(indptr[v], indptr[v + 1]):
        if side[nbr[j]] != sv:
            g += wt[j]
        else:
            g -= wt[j]
    return int(g)


def maxcut_flip(indptr, nbr, wt, side, order):
    """Single-vertex flips until no flip increases the cut."""
    side = np.array(side, dtype=np.int8)
    n = len(indptr) - 1
    gain = np.zeros(n, dtype=np.int64)
    for v in range(n):
        gain[v] = _move_gain(indptr, nbr, wt, side, v)
    changed = True
    while changed:
        changed = False
        for v in order:
            if gain[v] < 0:
                side[v] = 1 - side[v]
                gain[v] = -gain[v]
                for j in range(indptr[v], indptr[v + 1]):
                    u = nbr[j]
                    if side[u] == side[v]:
                        gain[u] -= 2 * wt[j]
                    else:
                        gain[u] += 2 * wt[j]
                changed = True
    return side


def _weight_between(indptr, nbr, wt, u, v):
    for j in range(indptr[u], indptr[u + 1]):
        if nbr[j] == v:
            return int(wt[j])
    return 0


def bisect_swap(indptr, nbr, wt, side, order):
    """Pairwise-swap local search for a two-block partition.

    Vertices sit in gain buckets per side; the search walks both sides from the
    highest gain down and takes the first swap that strictly lowers the cut.
    Block sizes never change.
    """
    side = np.array(side, dtype=np.int8)
    n = len(indptr) - 1
    if n == 0:
        return side
    wdeg = np.zeros(n, dtype=np.int64)
    for v in range(n):
        for j in range(indptr[v], indptr[v + 1]):
            wdeg[v] += wt[j]
    off = int(wdeg.max())
    nb = 2 * off + 1
    gain = np.zeros(n, dtype=np.int64)
    for v in range(n):
        gain[v] = _move_gain(indptr, nbr, wt, side, v)
    head = np.full((2, nb), -1, dtype=np.int64)
    nxt = np.full(n, -1, dtype=np.int64)
    prv = np.full(n, -1, dtype=np.int64)
    stamp = np.zeros(n, dtype=np.int64)
    aff = np.empty(n, dtype=np.int64)

    def insert(v):
        s = side[v]
        b = gain[v] + off
        h = head[s, b]
        nxt[v] = h
        prv[v] = -1
        if h != -1:
            prv[h] = v
        head[s, b] = v

    def remove(v):
        s = side[v]
        b = gain[v] + off
        if prv[v] != -1:
            nxt[prv[v]] = nxt[v]
        else:
            head[s, b] = nxt[v]
        if nxt[v] != -1:
            prv[nxt[v]] = prv[v]

    for i in range(n - 1, -1, -1):
        insert(order[i])

    rnd = 0
    while True:
        top0 = nb - 1
        while top0 >= 0 and head[0, top0] == -1:
            top0 -= 1
        top1 = nb - 1
        while top1 >= 0 and head[1, top1] == -1:
            top1 -= 1
        if top0 < 0 or top1 < 0:
            break
        bu = bv = -1
        ga = top0
        while ga >= 0 and bu < 0:
            if ga + top1 - 2 * off <= 0:
                break
            u = head[0, ga]
            while u != -1 and bu < 0:
                gb = top1
                while gb >= 0 and ga + gb - 2 * off > 0 and bu < 0:
                    v = head[1, gb]
                    while v != -1:
                        if ga + gb - 2 * off - 2 * _weight_between(indptr, nbr, wt, u, v) > 0:
                            bu, bv = u, v
                            break
                        v = nxt[v]
                    gb -= 1
                u = nxt[u]
            ga -= 1
        if bu < 0:
            break
        rnd += 1
        na = 0
        for x in (bu, bv):
            if stamp[x] != rnd:
                stamp[x] = rnd
                aff[na] = x
                na += 1
            for j in range(indptr[x], indptr[x + 1]):
                y = nbr[j]
                if stamp[y] != rnd:
                    stamp[y] = rnd
                    aff[na] = y
                    na += 1
        for i in range(na):
            remove(aff[i])
        side[bu] = 1
        side[bv] = 0
        for i in range(na):
            x = aff[i]
            gain[x] = _move_gain(indptr, nbr, wt, side, x)
            insert(x)
    return side


def maxcut_exhaustive(n, eu, ev, ew):
    """Exact Max-Cut of a small loopless weighted graph by Gray-code enumeration.

    Vertex n-1 stays on side 0. Returns ``(best, mask)`` where bit i of mask is
    the side of vertex i; the first optimum in Gray order wins.
    """
    if n <= 1:
        return 0, 0
    rows = [[] for _ in range(n)]
    for a, b, w in zip(eu, ev, ew):
        rows[a].append((b, int(w)))
        rows[b].append((a, int(w)))
    mask = 0
    cut = 0
    best = 0
    best_mask = 0
    for i in range(1, 1 << (n - 1)):
        b = (i & -i).bit_length() - 1
        sb = (mask >> b) & 1
        delta = 0
        for u, w in rows[b]:
            if ((mask >> u) & 1) == sb:
                delta += w
            else:
                delta -= w
        mask ^= 1 << b
        cut += delta
        if cut > best:
            best = cut
            best_mask = mask
    return best, best_mask
