# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; mirrors ``_pykernels`` for graphs with at most 64 vertices."""
from libc.math cimport sqrt, fabs
from libc.stdint cimport uint64_t

import numpy as np

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

cdef enum:
    MAXN = 64


cdef inline int popcount(uint64_t x) noexcept nogil:
    return __builtin_popcountll(x)


cdef inline int lowbit(uint64_t x) noexcept nogil:
    return __builtin_ctzll(x)


cdef void _load(adj, int n, uint64_t* rows):
    cdef int v
    for v in range(n):
        rows[v] = <uint64_t>adj[v]


cdef void _bk(uint64_t r, uint64_t p, uint64_t x, const uint64_t* comp, list out):
    cdef uint64_t px, cand, low
    cdef int u, v, c, best, pivot
    if p == 0:
        if x == 0:
            out.append(r)
        return
    best = -1
    pivot = 0
    px = p | x
    while px:
        u = lowbit(px)
        c = popcount(p & comp[u])
        if c > best:
            best = c
            pivot = u
        px &= px - 1
    cand = p & ~comp[pivot]
    while cand:
        v = lowbit(cand)
        low = (<uint64_t>1) << v
        _bk(r | low, p & comp[v], x & comp[v], comp, out)
        p &= ~low
        x |= low
        cand &= cand - 1


def maximal_independent_sets(adj, int n):
    cdef uint64_t rows[MAXN]
    cdef uint64_t comp[MAXN]
    cdef uint64_t full
    cdef int v
    cdef list out = []
    if n == 0:
        return [0]
    _load(adj, n, rows)
    full = (~(<uint64_t>0)) if n == 64 else (((<uint64_t>1) << n) - 1)
    for v in range(n):
        comp[v] = full & ~rows[v] & ~((<uint64_t>1) << v)
    _bk(0, full, 0, comp, out)
    out.sort(key=lambda m: (-m.bit_count(), m))
    return out


def greedy_mis(adj, order):
    cdef uint64_t rows[MAXN]
    cdef uint64_t picked = 0, blocked = 0, bit
    cdef int n = len(adj)
    cdef int v
    _load(adj, n, rows)
    for v in order:
        bit = (<uint64_t>1) << v
        if not (blocked & bit):
            picked |= bit
            blocked |= rows[v] | bit
    return picked


def greedy_mis_batch(adj, orders):
    cdef uint64_t rows[MAXN]
    cdef uint64_t picked, blocked, bit
    cdef int n = len(adj)
    cdef long[:, ::1] o = np.ascontiguousarray(orders, dtype=np.int_)
    cdef Py_ssize_t i, j
    cdef int v
    cdef list out = []
    _load(adj, n, rows)
    for i in range(o.shape[0]):
        picked = 0
        blocked = 0
        for j in range(o.shape[1]):
            v = <int>o[i, j]
            bit = (<uint64_t>1) << v
            if not (blocked & bit):
                picked |= bit
                blocked |= rows[v] | bit
        out.append(picked)
    return out


cdef struct Search:
    int n
    int lb
    int best
    int found
    uint64_t rows[MAXN]
    uint64_t sat[MAXN]
    int deg[MAXN]
    int colors[MAXN]
    int best_colors[MAXN]


cdef int _search(Search* s, int ncolored, int used) noexcept nogil:
    cdef int u, v, c, limit, done, key_sat, key_deg, ks
    cdef uint64_t nb, changed, low
    if used >= s.best:
        return 0
    if ncolored == s.n:
        s.best = used
        s.found = 1
        for u in range(s.n):
            s.best_colors[u] = s.colors[u]
        return used <= s.lb
    v = -1
    key_sat = -1
    key_deg = -1
    for u in range(s.n):
        if s.colors[u] < 0:
            ks = popcount(s.sat[u])
            if ks > key_sat or (ks == key_sat and s.deg[u] > key_deg):
                key_sat = ks
                key_deg = s.deg[u]
                v = u
    limit = used + 1
    if s.best - 1 < limit:
        limit = s.best - 1
    c = 0
    while c < limit:
        if (s.sat[v] >> c) & 1:
            c += 1
            continue
        s.colors[v] = c
        changed = 0
        nb = s.rows[v]
        while nb:
            u = lowbit(nb)
            low = (<uint64_t>1) << u
            if s.colors[u] < 0 and not ((s.sat[u] >> c) & 1):
                s.sat[u] |= (<uint64_t>1) << c
                changed |= low
            nb &= nb - 1
        done = _search(s, ncolored + 1, used + 1 if c == used else used)
        while changed:
            u = lowbit(changed)
            s.sat[u] &= ~((<uint64_t>1) << c)
            changed &= changed - 1
        s.colors[v] = -1
        if done:
            return 1
        if s.best - 1 < limit:
            limit = s.best - 1
        c += 1
    return 0


def chromatic_number(adj, int n, int lb=1, ub=None):
    from ._pykernels import _dsatur_greedy
    cdef Search s
    cdef int v, greedy_k
    if n == 0:
        return 0, []
    greedy = _dsatur_greedy(adj, n)
    greedy_k = max(greedy) + 1
    s.n = n
    s.found = 0
    s.best = greedy_k
    if ub is not None and ub < greedy_k:
        s.best = ub + 1
    if lb < 1:
        lb = 1
    s.lb = lb
    if greedy_k <= lb:
        return greedy_k, list(greedy)
    _load(adj, n, s.rows)
    for v in range(n):
        s.sat[v] = 0
        s.colors[v] = -1
        s.deg[v] = popcount(s.rows[v])
    with nogil:
        _search(&s, 0, 0)
    if s.found:
        return s.best, [s.best_colors[v] for v in range(n)]
    if s.best != greedy_k:
        raise ValueError("upper bound hint below the chromatic number")
    return greedy_k, list(greedy)


def jacobi_eigh(a, double tol=1e-14, int max_sweeps=50):
    cdef double[:, ::1] m = np.array(a, dtype=np.float64, copy=True, order="C")
    cdef Py_ssize_t n = m.shape[0]
    cdef double[:, ::1] vv
    cdef Py_ssize_t p, q, k
    cdef int sweep
    cdef double scale, off, apq, theta, t, c, s, x, y
    v_arr = np.eye(n)
    vv = v_arr
    scale = 0.0
    for p in range(n):
        for q in range(n):
            scale += m[p, q] * m[p, q]
    scale = sqrt(scale)
    if n > 1 and scale > 0.0:
        with nogil:
            for sweep in range(max_sweeps):
                off = 0.0
                for p in range(n):
                    for q in range(n):
                        if p != q:
                            off += m[p, q] * m[p, q]
                if sqrt(off) <= tol * scale:
                    break
                for p in range(n - 1):
                    for q in range(p + 1, n):
                        apq = m[p, q]
                        if fabs(apq) <= 1e-300:
                            continue
                        theta = (m[q, q] - m[p, p]) / (2.0 * apq)
                        t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                        if theta < 0.0:
                            t = -t
                        c = 1.0 / sqrt(t * t + 1.0)
                        s = t * c
                        for k in range(n):
                            x = m[k, p]
                            y = m[k, q]
                            m[k, p] = c * x - s * y
                            m[k, q] = s * x + c * y
                        for k in range(n):
                            x = m[p, k]
                            y = m[q, k]
                            m[p, k] = c * x - s * y
                            m[q, k] = s * x + c * y
                        m[p, q] = 0.0
                        m[q, p] = 0.0
                        for k in range(n):
                            x = vv[k, p]
                            y = vv[k, q]
                            vv[k, p] = c * x - s * y
                            vv[k, q] = s * x + c * y
    w = np.array([m[k, k] for k in range(n)], dtype=np.float64)
    order = np.argsort(-w, kind="stable")
    return w[order], v_arr[:, order]
