"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it imports and the graph
fits its 64-bit bitsets; ``_pykernels`` covers everything else. Set
``BBQMIS_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

try:
    if os.environ.get("BBQMIS_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-Python kernels forced by environment")
    from . import _kernels
except ImportError:
    _kernels = None

BACKEND = "cython" if _kernels is not None else "python"
_fast = _kernels if _kernels is not None else _pykernels


def _pick(n):
    return _fast if n <= 64 else _pykernels


def maximal_independent_sets(adj, n):
    return _pick(n).maximal_independent_sets(adj, n)


def greedy_mis(adj, order):
    return _pick(len(adj)).greedy_mis(adj, order)


def greedy_mis_batch(adj, orders):
    return _pick(len(adj)).greedy_mis_batch(adj, orders)


def chromatic_number(adj, n, lb=1, ub=None):
    return _pick(n).chromatic_number(adj, n, lb, ub)


def jacobi_eigh(a, tol=1e-14, max_sweeps=50):
    return _fast.jacobi_eigh(a, tol, max_sweeps)
