"""Numpy/scipy fallback for the exploration and walk kernels.

Moves are encoded as four parallel arrays: ``kind`` (0 right multiply,
1 left multiply, 2 invert, 3 apply element permutation), ``pos_i``, ``pos_j``
and ``aux`` (0/1 for sign +1/-1 on multiplications, permutation row for kind 3).
"""
from __future__ import annotations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

BACKEND = "python"

_EDGE_BATCH = 1 << 24


def decode(codes: np.ndarray, n: int, k: int) -> np.ndarray:
    out = np.empty((codes.size, k), dtype=np.int64)
    c = codes.astype(np.int64, copy=True)
    for p in range(k):
        out[:, p] = c % n
        c //= n
    return out


def moved_entries(E, n, mul, inv, perms, kind, i, j, aux):
    x = E[:, i]
    if kind == 2:
        return inv[x]
    if kind == 3:
        return perms[aux][x]
    y = E[:, j] if aux == 0 else inv[E[:, j]]
    return mul[x, y] if kind == 0 else mul[y, x]


def _lookup(targets, codes, dense_index):
    if dense_index is not None:
        idx = dense_index[targets]
        ok = idx >= 0
    else:
        idx = np.searchsorted(codes, targets)
        idx = np.minimum(idx, codes.size - 1)
        ok = codes[idx] == targets
    if not ok.all():
        bad = int(targets[np.flatnonzero(~ok)[0]])
        raise RuntimeError(f"move left the vertex set (code {bad})")
    return idx


def _min_labels(V, rows, cols):
    graph = coo_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(V, V)).tocsr()
    _, comp = connected_components(graph, directed=False)
    _, first = np.unique(comp, return_index=True)
    # first occurrence is the smallest vertex index of each component
    return first[comp].astype(np.int64)


def label_components(codes, n, k, mul, inv, perms, kind, pos_i, pos_j, aux, dense_index=None):
    """Smallest vertex index of the component of every vertex."""
    V = codes.size
    if V == 0:
        return np.zeros(0, dtype=np.int64)
    E = decode(codes, n, k)
    weights = n ** np.arange(k, dtype=np.int64)
    verts = np.arange(V, dtype=np.int64)
    labels = verts.copy()
    rows, cols, pending = [], [], 0
    for m in range(kind.size):
        i, j = int(pos_i[m]), int(pos_j[m])
        new = moved_entries(E, n, mul, inv, perms, int(kind[m]), i, j, int(aux[m]))
        targets = codes + (new.astype(np.int64) - E[:, i]) * weights[i]
        rows.append(verts)
        cols.append(_lookup(targets, codes, dense_index))
        pending += V
        if pending >= _EDGE_BATCH:
            rows.append(verts)
            cols.append(labels)
            labels = _min_labels(V, np.concatenate(rows), np.concatenate(cols))
            rows, cols, pending = [], [], 0
    if rows:
        rows.append(verts)
        cols.append(labels)
        labels = _min_labels(V, np.concatenate(rows), np.concatenate(cols))
    return labels


def apply_moves(entries, mul, inv, perms, kind, pos_i, pos_j, aux, choices):
    """Apply the moves ``choices`` in order to ``entries`` (modified in place)."""
    t = [int(v) for v in entries]
    mul_l, inv_l, perms_l = mul.tolist(), inv.tolist(), perms.tolist()
    kind_l, pi, pj, ax = kind.tolist(), pos_i.tolist(), pos_j.tolist(), aux.tolist()
    for m in choices.tolist():
        i = pi[m]
        x = t[i]
        kd = kind_l[m]
        if kd == 2:
            t[i] = inv_l[x]
        elif kd == 3:
            t[i] = perms_l[ax[m]][x]
        else:
            y = t[pj[m]]
            if ax[m]:
                y = inv_l[y]
            t[i] = mul_l[x][y] if kd == 0 else mul_l[y][x]
    entries[:] = t


def run_sampler(entries, mul, inv, perms, kind, pos_i, pos_j, aux, choices, burn_in, stride, coords):
    """Burn in, then emit ``entries[coords[s]]`` after every ``stride`` further moves."""
    count = coords.size
    out = np.empty(count, dtype=np.int64)
    apply_moves(entries, mul, inv, perms, kind, pos_i, pos_j, aux, choices[:burn_in])
    t = [int(v) for v in entries]
    mul_l, inv_l, perms_l = mul.tolist(), inv.tolist(), perms.tolist()
    kind_l, pi, pj, ax = kind.tolist(), pos_i.tolist(), pos_j.tolist(), aux.tolist()
    ch = choices.tolist()
    cs = coords.tolist()
    pos = burn_in
    for s in range(count):
        for m in ch[pos:pos + stride]:
            i = pi[m]
            x = t[i]
            kd = kind_l[m]
            if kd == 2:
                t[i] = inv_l[x]
            elif kd == 3:
                t[i] = perms_l[ax[m]][x]
            else:
                y = t[pj[m]]
                if ax[m]:
                    y = inv_l[y]
                t[i] = mul_l[x][y] if kd == 0 else mul_l[y][x]
        pos += stride
        out[s] = t[cs[s]]
    entries[:] = t
    return out
