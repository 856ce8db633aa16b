"""Pure-Python reference kernels.

Every function here has a compiled twin in ``_kernels.pyx`` with the same
signature and the same results. Graphs are passed as adjacency bitset rows:
``adj[v]`` is an ``int`` whose bit ``u`` is set iff ``{u, v}`` is an edge.
"""
import math

import numpy as np


def maximal_independent_sets(adj, n):
    """All maximal independent sets as local bitmasks, in canonical order.

    Bron-Kerbosch with Tomita pivoting, run on the complement graph (maximal
    independent sets of G are the maximal cliques of its complement).
    Ordered by size descending, then mask ascending.
    """
    if n == 0:
        return [0]
    full = (1 << n) - 1
    comp = [full & ~adj[v] & ~(1 << v) for v in range(n)]
    out = []
    stack = [(0, full, 0)]
    while stack:
        r, p, x = stack.pop()
        if not p:
            if not x:
                out.append(r)
            continue
        # pivot maximizing |P ∩ N_comp(u)| over u in P ∪ X
        pivot, best = 0, -1
        px = p | x
        while px:
            low = px & -px
            u = low.bit_length() - 1
            c = (p & comp[u]).bit_count()
            if c > best:
                best, pivot = c, u
            px ^= low
        cand = p & ~comp[pivot]
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            stack.append((r | low, p & comp[v], x & comp[v]))
            p &= ~low
            x |= low
            cand ^= low
    out.sort(key=lambda m: (-m.bit_count(), m))
    return out


def greedy_mis(adj, order):
    """Scan ``order`` and keep every vertex not blocked by an earlier pick."""
    picked = 0
    blocked = 0
    for v in order:
        bit = 1 << int(v)
        if not blocked & bit:
            picked |= bit
            blocked |= adj[v] | bit
    return picked


def greedy_mis_batch(adj, orders):
    """One :func:`greedy_mis` result per row of the 2D array ``orders``."""
    return [greedy_mis(adj, row) for row in orders]


def _dsatur_greedy(adj, n):
    colors = [-1] * n
    sat = [0] * n
    deg = [a.bit_count() for a in adj]
    for _ in range(n):
        v = max((u for u in range(n) if colors[u] < 0),
                key=lambda u: (sat[u].bit_count(), deg[u], -u))
        c = 0
        while sat[v] >> c & 1:
            c += 1
        colors[v] = c
        nb = adj[v]
        while nb:
            low = nb & -nb
            sat[low.bit_length() - 1] |= 1 << c
            nb ^= low
    return colors


def chromatic_number(adj, n, lb=1, ub=None):
    """Exact chromatic number by DSATUR branch and bound.

    ``lb`` must be a valid lower bound (the search stops once it is met) and
    ``ub``, if given, a valid upper bound. Returns ``(k, colors)`` where
    ``colors[v]`` is in ``range(k)``.
    """
    if n == 0:
        return 0, []
    greedy = _dsatur_greedy(adj, n)
    greedy_k = max(greedy) + 1
    lb = max(lb, 1)
    if greedy_k <= lb:
        return greedy_k, greedy
    best = [greedy_k, list(greedy)]
    if ub is not None and ub < greedy_k:
        best[0] = ub + 1

    colors = [-1] * n
    sat = [0] * n
    deg = [a.bit_count() for a in adj]

    def search(ncolored, used):
        if used >= best[0]:
            return False
        if ncolored == n:
            best[0] = used
            best[1] = list(colors)
            return used <= lb
        v, key = -1, (-1, -1)
        for u in range(n):
            if colors[u] < 0:
                k = (sat[u].bit_count(), deg[u])
                if k > key:
                    key, v = k, u
        limit = min(used + 1, best[0] - 1)
        for c in range(limit):
            if sat[v] >> c & 1:
                continue
            colors[v] = c
            changed = 0
            nb = adj[v]
            while nb:
                low = nb & -nb
                u = low.bit_length() - 1
                if colors[u] < 0 and not sat[u] >> c & 1:
                    sat[u] |= 1 << c
                    changed |= low
                nb ^= low
            done = search(ncolored + 1, used + 1 if c == used else used)
            while changed:
                low = changed & -changed
                sat[low.bit_length() - 1] &= ~(1 << c)
                changed ^= low
            colors[v] = -1
            if done:
                return True
            limit = min(limit, best[0] - 1)
        return False

    search(0, 0)
    if max(best[1]) + 1 != best[0]:
        raise ValueError("upper bound hint below the chromatic number")
    return best[0], best[1]


def jacobi_eigh(a, tol=1e-14, max_sweeps=50):
    """Cyclic Jacobi eigensolver for a real symmetric matrix.

    Returns ``(w, v)`` with eigenvalues sorted descending and eigenvectors in
    the matching columns of ``v``.
    """
    a = np.array(a, dtype=np.float64, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    scale = math.sqrt(float(np.sum(a * a)))
    if n > 1 and scale > 0.0:
        for _ in range(max_sweeps):
            off = math.sqrt(2.0 * float(np.sum(np.triu(a, 1) ** 2)))
            if off <= tol * scale:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if abs(apq) <= 1e-300:
                        continue
                    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                    c = 1.0 / math.sqrt(t * t + 1.0)
                    s = t * c
                    colp = a[:, p].copy()
                    a[:, p] = c * colp - s * a[:, q]
                    a[:, q] = s * colp + c * a[:, q]
                    rowp = a[p, :].copy()
                    a[p, :] = c * rowp - s * a[q, :]
                    a[q, :] = s * rowp + c * a[q, :]
                    a[p, q] = a[q, p] = 0.0
                    vp = v[:, p].copy()
                    v[:, p] = c * vp - s * v[:, q]
                    v[:, q] = s * vp + c * v[:, q]
    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]
