"""Hot loops over the 2^n subsets of a ground set.

Each kernel has a numba implementation and a vectorised numpy twin.  The
numba path is used when numba imports cleanly and ``MATROIDKIT_PURE_NUMPY``
is unset (or ``0``); the numpy path is always available and is what the
test-suite cross-checks the compiled kernels against.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    HAS_NUMBA = False


def _flag() -> bool:
    return os.environ.get("MATROIDKIT_PURE_NUMPY", "0") not in ("", "0", "false", "no")


USE_NUMBA = HAS_NUMBA and not _flag()


def popcounts(n: int) -> np.ndarray:
    """Popcount of every mask below 2^n as int8."""
    pc = np.zeros(1 << n, dtype=np.int8)
    for i in range(n):
        step = 1 << i
        pc.reshape(-1, 2 * step)[:, step:] += 1
    return pc


def subset_masks(mask: int) -> np.ndarray:
    """All submasks of ``mask`` in increasing order, as int64."""
    bits = [i for i in range(mask.bit_length()) if mask >> i & 1]
    out = np.zeros(1 << len(bits), dtype=np.int64)
    for j, b in enumerate(bits):
        half = 1 << j
        out[half : 2 * half] = out[:half] | (1 << b)
    return out


# --------------------------------------------------------------------------
# linear ranks over a finite field given by lookup tables


def _linear_ranks_numpy(cols, masks, add, mul, neg, inv):
    """Batched Gaussian elimination.

    ``cols`` is (n, r) with field indices; every mask selects a set of
    columns and we eliminate all of them at once, one column position at a
    time.
    """
    n, r = cols.shape
    out = np.zeros(len(masks), dtype=np.int8)
    chunk = max(1, (1 << 22) // max(1, n * r))
    for start in range(0, len(masks), chunk):
        ms = masks[start : start + chunk]
        b = len(ms)
        # working copy: (b, n, r), unselected columns zeroed
        sel = ((ms[:, None] >> np.arange(n)) & 1).astype(bool)
        work = np.where(sel[:, :, None], cols[None, :, :], 0).astype(np.int64)
        used = np.zeros((b, r), dtype=bool)
        rank = np.zeros(b, dtype=np.int8)
        rows = np.arange(b)
        for j in range(n):
            v = work[:, j, :]
            cand = (v != 0) & ~used
            has = cand.any(axis=1)
            if not has.any():
                continue
            piv = np.argmax(cand, axis=1)
            rank += has
            used[rows[has], piv[has]] = True
            # normalise the column so the pivot entry is one, then clear the
            # pivot coordinate from the remaining columns
            pv = v[rows, piv]
            scale = np.where(has, inv[np.where(pv == 0, 1, pv)], 0)
            vn = mul[scale[:, None], v]
            for jj in range(j + 1, n):
                w = work[:, jj, :]
                f = w[rows, piv]
                f = np.where(has, f, 0)
                work[:, jj, :] = add[w, mul[neg[f][:, None], vn]]
        out[start : start + b] = rank
    return out


def _linear_ranks_loop(cols, masks, add, mul, neg, inv):
    n, r = cols.shape
    out = np.zeros(len(masks), dtype=np.int8)
    buf = np.zeros((n, r), dtype=np.int64)
    for t in range(len(masks)):
        m = masks[t]
        k = 0
        for j in range(n):
            if (m >> j) & 1:
                for i in range(r):
                    buf[k, i] = cols[j, i]
                k += 1
        rank = 0
        used = np.zeros(r, dtype=np.bool_)
        for j in range(k):
            piv = -1
            for i in range(r):
                if not used[i] and buf[j, i] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            used[piv] = True
            rank += 1
            s = inv[buf[j, piv]]
            for i in range(r):
                buf[j, i] = mul[s, buf[j, i]]
            for jj in range(j + 1, k):
                f = buf[jj, piv]
                if f != 0:
                    nf = neg[f]
                    for i in range(r):
                        buf[jj, i] = add[buf[jj, i], mul[nf, buf[j, i]]]
        out[t] = rank
    return out


# --------------------------------------------------------------------------
# graph-like ranks: graphic (|V| - components) and bicircular
# (per component min(|E|, |V|)); an edge with v == -1 is a half-edge


def _graph_ranks_numpy(us, vs, nverts, masks, bicircular):
    n = len(us)
    b = len(masks)
    out = np.zeros(b, dtype=np.int8)
    chunk = max(1, (1 << 22) // max(1, nverts))
    vv = np.where(vs < 0, us, vs)
    for start in range(0, b, chunk):
        ms = masks[start : start + chunk]
        c = len(ms)
        sel = ((ms[:, None] >> np.arange(n)) & 1).astype(bool)
        lab = np.tile(np.arange(nverts), (c, 1))
        rows = np.arange(c)
        changed = True
        while changed:
            changed = False
            for e in range(n):
                s = sel[:, e]
                if not s.any():
                    continue
                a = lab[rows, us[e]]
                z = lab[rows, vv[e]]
                lo = np.minimum(a, z)
                upd = s & (a != z)
                if upd.any():
                    changed = True
                    # relabel whole classes so convergence is quick
                    hi = np.maximum(a, z)
                    hit = (lab == hi[:, None]) & upd[:, None]
                    lab = np.where(hit, lo[:, None], lab)
        touched = np.zeros((c, nverts), dtype=bool)
        for e in range(n):
            s = sel[:, e]
            touched[s, us[e]] = True
            touched[s, vv[e]] = True
        if not bicircular:
            comps = np.zeros(c, dtype=np.int64)
            for v in range(nverts):
                comps += touched[:, v] & (lab[:, v] == v)
            out[start : start + c] = touched.sum(axis=1) - comps
        else:
            ecount = np.zeros((c, nverts), dtype=np.int64)
            for e in range(n):
                ecount[rows, lab[:, us[e]]] += sel[:, e]
            vcount = np.zeros((c, nverts), dtype=np.int64)
            for v in range(nverts):
                vcount[rows, lab[:, v]] += touched[:, v]
            out[start : start + c] = np.minimum(ecount, vcount).sum(axis=1)
    return out


def _graph_ranks_loop(us, vs, nverts, masks, bicircular):
    n = len(us)
    out = np.zeros(len(masks), dtype=np.int8)
    parent = np.zeros(nverts, dtype=np.int64)
    ecount = np.zeros(nverts, dtype=np.int64)
    vcount = np.zeros(nverts, dtype=np.int64)
    touched = np.zeros(nverts, dtype=np.bool_)
    for t in range(len(masks)):
        m = masks[t]
        for v in range(nverts):
            parent[v] = v
            ecount[v] = 0
            vcount[v] = 0
            touched[v] = False
        for e in range(n):
            if (m >> e) & 1:
                a = us[e]
                z = vs[e] if vs[e] >= 0 else a
                touched[a] = True
                touched[z] = True
                while parent[a] != a:
                    a = parent[a]
                while parent[z] != z:
                    z = parent[z]
                if a != z:
                    if a < z:
                        parent[z] = a
                    else:
                        parent[a] = z
        rank = 0
        if not bicircular:
            for v in range(nverts):
                if touched[v]:
                    rank += 1
                    if parent[v] == v:
                        rank -= 1
        else:
            for e in range(n):
                if (m >> e) & 1:
                    a = us[e]
                    while parent[a] != a:
                        a = parent[a]
                    ecount[a] += 1
            for v in range(nverts):
                if touched[v]:
                    a = v
                    while parent[a] != a:
                        a = parent[a]
                    vcount[a] += 1
            for v in range(nverts):
                rank += min(ecount[v], vcount[v])
        out[t] = rank
    return out


# --------------------------------------------------------------------------
# minimum connectivity over all sets between two fixed masks


def _min_conn_numpy(table, lo, free):
    full = len(table) - 1
    sub = subset_masks(free)
    sets = sub | lo
    vals = table[sets].astype(np.int64) + table[full ^ sets] - table[full]
    return int(vals.min())


def _min_conn_loop(table, lo, free):
    # depth-first branch and bound; bound is the local connectivity of the
    # committed parts, which is monotone in both arguments
    full = len(table) - 1
    hi = full ^ lo ^ free
    top = table[full]
    bits = np.zeros(64, dtype=np.int64)
    nb = 0
    for i in range(63):
        if (free >> i) & 1:
            bits[nb] = i
            nb += 1
    best = 1 << 30
    stack_in = np.zeros(nb + 1, dtype=np.int64)
    stack_out = np.zeros(nb + 1, dtype=np.int64)
    stack_d = np.zeros(nb + 1, dtype=np.int64)
    stack_s = np.zeros(nb + 1, dtype=np.int64)
    sp = 0
    stack_in[0] = lo
    stack_out[0] = hi
    stack_d[0] = 0
    stack_s[0] = 0
    while sp >= 0:
        a = stack_in[sp]
        z = stack_out[sp]
        d = stack_d[sp]
        st = stack_s[sp]
        if st == 0:
            bound = table[a] + table[z] - table[a | z]
            if bound >= best:
                sp -= 1
                continue
            if d == nb:
                v = table[a] + table[full ^ a] - top
                if v < best:
                    best = v
                sp -= 1
                continue
            stack_s[sp] = 1
            sp += 1
            stack_in[sp] = a | (1 << bits[d])
            stack_out[sp] = z
            stack_d[sp] = d + 1
            stack_s[sp] = 0
        elif st == 1:
            stack_s[sp] = 2
            sp += 1
            stack_in[sp] = a
            stack_out[sp] = z | (1 << bits[d])
            stack_d[sp] = d + 1
            stack_s[sp] = 0
        else:
            sp -= 1
    return int(best)


if HAS_NUMBA:
    _linear_ranks_jit = njit(cache=True)(_linear_ranks_loop)
    _graph_ranks_jit = njit(cache=True)(_graph_ranks_loop)
    _min_conn_jit = njit(cache=True)(_min_conn_loop)


def _tables(field):
    return (
        np.ascontiguousarray(field.add, dtype=np.int64),
        np.ascontiguousarray(field.mul, dtype=np.int64),
        np.ascontiguousarray(field.neg, dtype=np.int64),
        np.ascontiguousarray(field.inv, dtype=np.int64),
    )


def linear_ranks(cols, masks, field, backend: str | None = None) -> np.ndarray:
    """Rank of the column sets ``masks`` of the (n, r) array ``cols``."""
    cols = np.ascontiguousarray(cols, dtype=np.int64)
    masks = np.ascontiguousarray(masks, dtype=np.int64)
    if cols.shape[1] == 0:
        return np.zeros(len(masks), dtype=np.int8)
    tabs = _tables(field)
    if _pick(backend) == "numba":
        return _linear_ranks_jit(cols, masks, *tabs)
    return _linear_ranks_numpy(cols, masks, *tabs)


def graph_ranks(us, vs, nverts, masks, bicircular=False, backend=None) -> np.ndarray:
    us = np.ascontiguousarray(us, dtype=np.int64)
    vs = np.ascontiguousarray(vs, dtype=np.int64)
    masks = np.ascontiguousarray(masks, dtype=np.int64)
    if _pick(backend) == "numba":
        return _graph_ranks_jit(us, vs, nverts, masks, bicircular)
    return _graph_ranks_numpy(us, vs, nverts, masks, bicircular)


def min_conn(table, lo: int, free: int, backend=None) -> int:
    """min over lo <= A <= lo|free of r(A) + r(E-A) - r(E)."""
    if _pick(backend) == "numba":
        return _min_conn_jit(np.ascontiguousarray(table, dtype=np.int64), lo, free)
    return _min_conn_numpy(table, lo, free)


def _pick(backend):
    if backend is None:
        return "numba" if USE_NUMBA else "numpy"
    if backend == "numba" and not HAS_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    return backend
