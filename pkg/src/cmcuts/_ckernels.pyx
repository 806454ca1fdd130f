# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled graph kernels; mirrors ``_pykernels`` step for step."""

import numpy as np
cimport numpy as cnp

ctypedef cnp.int64_t i64
ctypedef cnp.int8_t i8

cnp.import_array()

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


def peel_core(i64[::1] indptr, i64[::1] indices, i64 k):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef i64[::1] deg = np.empty(n, dtype=np.int64)
    cdef cnp.uint8_t[::1] removed = np.zeros(n, dtype=np.uint8)
    cdef i64[::1] stack = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t top = 0, v, u, j
    for v in range(n):
        deg[v] = indptr[v + 1] - indptr[v]
        if deg[v] < k:
            removed[v] = 1
            stack[top] = v
            top += 1
    while top > 0:
        top -= 1
        v = stack[top]
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            if removed[u]:
                continue
            deg[u] -= 1
            if deg[u] < k:
                removed[u] = 1
                stack[top] = u
                top += 1
    out = np.empty(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] o = out
    for v in range(n):
        o[v] = 1 - removed[v]
    return out


def bfs_levels(i64[::1] indptr, i64[::1] indices, sources, i64 max_depth):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    dist_arr = np.full(n, -1, dtype=np.int64)
    cdef i64[::1] dist = dist_arr
    cdef i64[::1] queue = np.empty(n, dtype=np.int64)
    cdef i64[::1] src = np.ascontiguousarray(sources, dtype=np.int64)
    cdef Py_ssize_t head = 0, tail = 0, i, j, v, u
    cdef i64 dv
    for i in range(src.shape[0]):
        v = src[i]
        if dist[v] < 0:
            dist[v] = 0
            queue[tail] = v
            tail += 1
    while head < tail:
        v = queue[head]
        head += 1
        dv = dist[v]
        if max_depth >= 0 and dv >= max_depth:
            continue
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            if dist[u] < 0:
                dist[u] = dv + 1
                queue[tail] = u
                tail += 1
    return dist_arr


def two_color(i64[::1] indptr, i64[::1] indices):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    color_arr = np.full(n, -1, dtype=np.int8)
    comp_arr = np.full(n, -1, dtype=np.int64)
    flags_arr = np.zeros(n, dtype=np.uint8)
    cdef i8[::1] color = color_arr
    cdef i64[::1] comp = comp_arr
    cdef cnp.uint8_t[::1] flags = flags_arr
    cdef i64[::1] queue = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t s, v, u, j, head, tail
    cdef i64 label = 0
    cdef int bad
    for s in range(n):
        if comp[s] >= 0:
            continue
        bad = 0
        comp[s] = label
        color[s] = 0
        queue[0] = s
        head = 0
        tail = 1
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
        flags[label] = bad
        label += 1
    return color_arr, comp_arr, flags_arr[:label].copy()


cdef void _extend(i64 s, i64 v, int length, i64 weight, int K,
                  i64[::1] indptr, i64[::1] nbr, i64[::1] wt,
                  cnp.uint8_t[::1] on_path, i64[::1] counts) noexcept nogil:
    cdef Py_ssize_t j
    cdef i64 u
    for j in range(indptr[v], indptr[v + 1]):
        u = nbr[j]
        if u == s:
            if length >= 3:
                counts[length] += weight * wt[j]
        elif u > s and not on_path[u] and length < K:
            on_path[u] = 1
            _extend(s, u, length + 1, weight * wt[j], K, indptr, nbr, wt, on_path, counts)
            on_path[u] = 0


def count_cycles(i64[::1] indptr, i64[::1] nbr, i64[::1] wt, int K):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    counts_arr = np.zeros(K + 1, dtype=np.int64)
    cdef i64[::1] counts = counts_arr
    cdef cnp.uint8_t[::1] on_path = np.zeros(n, dtype=np.uint8)
    cdef i64 s
    with nogil:
        for s in range(n):
            on_path[s] = 1
            _extend(s, s, 1, 1, K, indptr, nbr, wt, on_path, counts)
            on_path[s] = 0
    return counts_arr // 2


cdef inline i64 _move_gain(i64[::1] indptr, i64[::1] nbr, i64[::1] wt,
                           i8[::1] side, Py_ssize_t v) noexcept nogil:
    cdef i64 g = 0
    cdef Py_ssize_t j
    cdef i8 sv = side[v]
    for j in range(indptr[v], indptr[v + 1]):
        if side[nbr[j]] != sv:
            g += wt[j]
        else:
            g -= wt[j]
    return g


def maxcut_flip(i64[::1] indptr, i64[::1] nbr, i64[::1] wt, side_in, order_in):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    side_arr = np.array(side_in, dtype=np.int8)
    cdef i8[::1] side = side_arr
    cdef i64[::1] order = np.ascontiguousarray(order_in, dtype=np.int64)
    cdef i64[::1] gain = np.zeros(n, dtype=np.int64)
    cdef Py_ssize_t v, u, j, i
    cdef bint changed = True
    with nogil:
        for v in range(n):
            gain[v] = _move_gain(indptr, nbr, wt, side, v)
        while changed:
            changed = False
            for i in range(order.shape[0]):
                v = order[i]
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
    return side_arr


cdef inline i64 _weight_between(i64[::1] indptr, i64[::1] nbr, i64[::1] wt,
                                i64 u, i64 v) noexcept nogil:
    cdef Py_ssize_t j
    for j in range(indptr[u], indptr[u + 1]):
        if nbr[j] == v:
            return wt[j]
    return 0


def bisect_swap(i64[::1] indptr, i64[::1] nbr, i64[::1] wt, side_in, order_in):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    side_arr = np.array(side_in, dtype=np.int8)
    if n == 0:
        return side_arr
    cdef i8[::1] side = side_arr
    cdef i64[::1] order = np.ascontiguousarray(order_in, dtype=np.int64)
    cdef i64[::1] gain = np.zeros(n, dtype=np.int64)
    cdef i64[::1] nxt = np.full(n, -1, dtype=np.int64)
    cdef i64[::1] prv = np.full(n, -1, dtype=np.int64)
    cdef i64[::1] stamp = np.zeros(n, dtype=np.int64)
    cdef i64[::1] aff = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t v, j, i, x, y, na
    cdef i64 off = 0, wd, nb, top0, top1, ga, gb, u, w, bu, bv, rnd = 0, h, b
    for v in range(n):
        wd = 0
        for j in range(indptr[v], indptr[v + 1]):
            wd += wt[j]
        if wd > off:
            off = wd
    nb = 2 * off + 1
    cdef i64[:, ::1] head = np.full((2, nb), -1, dtype=np.int64)

    with nogil:
        for v in range(n):
            gain[v] = _move_gain(indptr, nbr, wt, side, v)
        for i in range(n - 1, -1, -1):
            v = order[i]
            b = gain[v] + off
            h = head[side[v], b]
            nxt[v] = h
            prv[v] = -1
            if h != -1:
                prv[h] = v
            head[side[v], b] = v

        while True:
            top0 = nb - 1
            while top0 >= 0 and head[0, top0] == -1:
                top0 -= 1
            top1 = nb - 1
            while top1 >= 0 and head[1, top1] == -1:
                top1 -= 1
            if top0 < 0 or top1 < 0:
                break
            bu = -1
            bv = -1
            ga = top0
            while ga >= 0 and bu < 0:
                if ga + top1 - 2 * off <= 0:
                    break
                u = head[0, ga]
                while u != -1 and bu < 0:
                    gb = top1
                    while gb >= 0 and ga + gb - 2 * off > 0 and bu < 0:
                        w = head[1, gb]
                        while w != -1:
                            if ga + gb - 2 * off - 2 * _weight_between(indptr, nbr, wt, u, w) > 0:
                                bu = u
                                bv = w
                                break
                            w = nxt[w]
                        gb -= 1
                    u = nxt[u]
                ga -= 1
            if bu < 0:
                break
            rnd += 1
            na = 0
            for i in range(2):
                x = bu if i == 0 else bv
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
                x = aff[i]
                b = gain[x] + off
                if prv[x] != -1:
                    nxt[prv[x]] = nxt[x]
                else:
                    head[side[x], b] = nxt[x]
                if nxt[x] != -1:
                    prv[nxt[x]] = prv[x]
            side[bu] = 1
            side[bv] = 0
            for i in range(na):
                x = aff[i]
                gain[x] = _move_gain(indptr, nbr, wt, side, x)
                b = gain[x] + off
                h = head[side[x], b]
                nxt[x] = h
                prv[x] = -1
                if h != -1:
                    prv[h] = x
                head[side[x], b] = x
    return side_arr


def maxcut_exhaustive(int n, eu, ev, ew):
    if n <= 1:
        return 0, 0
    if n > 62:
        raise ValueError("exhaustive Max-Cut limited to 62 vertices")
    cdef i64[:, ::1] W = np.zeros((n, n), dtype=np.int64)
    cdef Py_ssize_t a, c, e
    for a, c, e in zip(eu, ev, ew):
        W[a, c] += e
        W[c, a] += e
    cdef unsigned long long i, limit = 1ULL << (n - 1), mask = 0, best_mask = 0
    cdef i64 cut = 0, best = 0, delta
    cdef int bit, u
    cdef unsigned long long sb
    with nogil:
        i = 1
        while i < limit:
            bit = __builtin_ctzll(i)
            sb = (mask >> bit) & 1
            delta = 0
            for u in range(n):
                if W[bit, u] != 0:
                    if ((mask >> u) & 1) == sb:
                        delta += W[bit, u]
                    else:
                        delta -= W[bit, u]
            mask ^= 1ULL << bit
            cut += delta
            if cut > best:
                best = cut
                best_mask = mask
            i += 1
    return int(best), int(best_mask)
