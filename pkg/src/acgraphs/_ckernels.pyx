# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled exploration and walk kernels; same contracts as ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, int32_t, int8_t

BACKEND = "cython"

cdef enum:
    MAX_K = 64


cdef inline int64_t _find(int64_t[::1] parent, int64_t v) noexcept nogil:
    while parent[v] != v:
        parent[v] = parent[parent[v]]
        v = parent[v]
    return v


cdef inline int64_t _search(const int64_t[::1] codes, int64_t target) noexcept nogil:
    cdef int64_t lo = 0, hi = codes.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if codes[mid] < target:
            lo = mid + 1
        else:
            hi = mid
    if lo < codes.shape[0] and codes[lo] == target:
        return lo
    return -1


cdef inline int32_t _moved(int32_t* t, const int32_t[:, ::1] mul, const int32_t[::1] inv,
                           const int32_t[:, ::1] perms, int8_t kind, int32_t i, int32_t j,
                           int32_t aux) noexcept nogil:
    cdef int32_t x = t[i], y
    if kind == 2:
        return inv[x]
    if kind == 3:
        return perms[aux, x]
    y = t[j]
    if aux:
        y = inv[y]
    if kind == 0:
        return mul[x, y]
    return mul[y, x]


def label_components(codes, int64_t n, int k, mul, inv, perms, kind, pos_i, pos_j, aux, dense_index=None):
    """Smallest vertex index of the component of every vertex."""
    if k > MAX_K:
        raise ValueError("tuple length too large for the compiled kernel")
    cdef const int64_t[::1] c = np.ascontiguousarray(codes, dtype=np.int64)
    cdef const int32_t[:, ::1] M = np.ascontiguousarray(mul, dtype=np.int32)
    cdef const int32_t[::1] I = np.ascontiguousarray(inv, dtype=np.int32)
    cdef const int32_t[:, ::1] P = np.ascontiguousarray(perms, dtype=np.int32)
    cdef const int8_t[::1] kd = np.ascontiguousarray(kind, dtype=np.int8)
    cdef const int32_t[::1] pi = np.ascontiguousarray(pos_i, dtype=np.int32)
    cdef const int32_t[::1] pj = np.ascontiguousarray(pos_j, dtype=np.int32)
    cdef const int32_t[::1] ax = np.ascontiguousarray(aux, dtype=np.int32)
    cdef bint dense = dense_index is not None
    cdef const int64_t[::1] D = np.ascontiguousarray(dense_index if dense else np.zeros(1), dtype=np.int64)
    cdef int64_t V = c.shape[0]
    parent_arr = np.arange(V, dtype=np.int64)
    cdef int64_t[::1] parent = parent_arr
    cdef int64_t weights[MAX_K]
    cdef int32_t t[MAX_K]
    cdef int64_t v, code, rem, target, w, ra, rb, bad = -1
    cdef int m, p, nm = kd.shape[0]
    cdef int32_t old, new
    weights[0] = 1
    for p in range(1, k):
        weights[p] = weights[p - 1] * n
    with nogil:
        for v in range(V):
            code = c[v]
            rem = code
            for p in range(k):
                t[p] = <int32_t>(rem % n)
                rem = rem // n
            for m in range(nm):
                old = t[pi[m]]
                new = _moved(t, M, I, P, kd[m], pi[m], pj[m], ax[m])
                target = code + (<int64_t>new - old) * weights[pi[m]]
                if dense:
                    w = D[target]
                else:
                    w = _search(c, target)
                if w < 0:
                    bad = target
                    break
                ra = _find(parent, v)
                rb = _find(parent, w)
                if ra < rb:
                    parent[rb] = ra
                elif rb < ra:
                    parent[ra] = rb
            if bad >= 0:
                break
        if bad < 0:
            for v in range(V):
                parent[v] = _find(parent, v)
    if bad >= 0:
        raise RuntimeError(f"move left the vertex set (code {bad})")
    return parent_arr


def apply_moves(entries, mul, inv, perms, kind, pos_i, pos_j, aux, choices):
    """Apply the moves ``choices`` in order to ``entries`` (modified in place)."""
    cdef const int32_t[:, ::1] M = np.ascontiguousarray(mul, dtype=np.int32)
    cdef const int32_t[::1] I = np.ascontiguousarray(inv, dtype=np.int32)
    cdef const int32_t[:, ::1] P = np.ascontiguousarray(perms, dtype=np.int32)
    cdef const int8_t[::1] kd = np.ascontiguousarray(kind, dtype=np.int8)
    cdef const int32_t[::1] pi = np.ascontiguousarray(pos_i, dtype=np.int32)
    cdef const int32_t[::1] pj = np.ascontiguousarray(pos_j, dtype=np.int32)
    cdef const int32_t[::1] ax = np.ascontiguousarray(aux, dtype=np.int32)
    cdef const int64_t[::1] ch = np.ascontiguousarray(choices, dtype=np.int64)
    cdef int k = len(entries)
    if k > MAX_K:
        raise ValueError("tuple length too large for the compiled kernel")
    cdef int32_t t[MAX_K]
    cdef int p
    cdef int64_t s, m
    for p in range(k):
        t[p] = entries[p]
    with nogil:
        for s in range(ch.shape[0]):
            m = ch[s]
            t[pi[m]] = _moved(t, M, I, P, kd[m], pi[m], pj[m], ax[m])
    for p in range(k):
        entries[p] = t[p]


def run_sampler(entries, mul, inv, perms, kind, pos_i, pos_j, aux, choices, int64_t burn_in,
                int64_t stride, coords):
    """Burn in, then emit ``entries[coords[s]]`` after every ``stride`` further moves."""
    cdef const int32_t[:, ::1] M = np.ascontiguousarray(mul, dtype=np.int32)
    cdef const int32_t[::1] I = np.ascontiguousarray(inv, dtype=np.int32)
    cdef const int32_t[:, ::1] P = np.ascontiguousarray(perms, dtype=np.int32)
    cdef const int8_t[::1] kd = np.ascontiguousarray(kind, dtype=np.int8)
    cdef const int32_t[::1] pi = np.ascontiguousarray(pos_i, dtype=np.int32)
    cdef const int32_t[::1] pj = np.ascontiguousarray(pos_j, dtype=np.int32)
    cdef const int32_t[::1] ax = np.ascontiguousarray(aux, dtype=np.int32)
    cdef const int64_t[::1] ch = np.ascontiguousarray(choices, dtype=np.int64)
    cdef const int64_t[::1] cs = np.ascontiguousarray(coords, dtype=np.int64)
    cdef int k = len(entries)
    if k > MAX_K:
        raise ValueError("tuple length too large for the compiled kernel")
    out_arr = np.empty(cs.shape[0], dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef int32_t t[MAX_K]
    cdef int p
    cdef int64_t s, r, m, pos = 0
    for p in range(k):
        t[p] = entries[p]
    with nogil:
        for pos in range(burn_in):
            m = ch[pos]
            t[pi[m]] = _moved(t, M, I, P, kd[m], pi[m], pj[m], ax[m])
        pos = burn_in
        for s in range(cs.shape[0]):
            for r in range(stride):
                m = ch[pos]
                t[pi[m]] = _moved(t, M, I, P, kd[m], pi[m], pj[m], ax[m])
                pos += 1
            out[s] = t[cs[s]]
    for p in range(k):
        entries[p] = t[p]
    return out_arr
