"""Derivative-free minimization with the Nelder-Mead simplex."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class OptimizeResult:
    x: np.ndarray
    fun: float
    nfev: int
    history: list = field(default_factory=list)  # best value seen after each evaluation

    def __iter__(self):
        return iter((self.x, self.fun, self.nfev))


class _BudgetExhausted(Exception):
    pass


def nelder_mead(objective, init, max_evals=200, bounds=None, step=0.1, xatol=1e-4,
                alpha=1.0, gamma=2.0, rho=0.5, sigma=0.5) -> OptimizeResult:
    """Minimize ``objective`` from ``init``.

    Parameters
    ----------
    objective : callable
        Maps a 1D float array to a float.
    init : array_like
        Starting point; must lie inside ``bounds``.
    max_evals : int
        Hard cap on objective evaluations.
    bounds : sequence of (lo, hi), optional
        Box constraints, enforced by clamping every trial point.
    step : float
        Relative perturbation for the initial simplex (absolute where the
        coordinate is zero).
    xatol : float
        Stop once every vertex is within this distance (max-norm) of the best.

    Returns
    -------
    OptimizeResult
        Best point and value seen, evaluations used and the best-so-far trace.
    """
    x0 = np.atleast_1d(np.asarray(init, dtype=float)).copy()
    k = x0.size
    if k < 1:
        raise ValueError("need at least one variable")
    if bounds is not None:
        lo = np.array([b[0] for b in bounds], dtype=float)
        hi = np.array([b[1] for b in bounds], dtype=float)
        if np.any(x0 < lo) or np.any(x0 > hi):
            raise ValueError("initial point outside bounds")
    else:
        lo = np.full(k, -np.inf)
        hi = np.full(k, np.inf)

    best = {"x": x0.copy(), "f": np.inf}
    history = []

    def f(x):
        if len(history) >= max_evals:
            raise _BudgetExhausted
        x = np.clip(x, lo, hi)
        val = float(objective(x))
        if val < best["f"]:
            best["x"], best["f"] = x.copy(), val
        history.append(best["f"])
        return x, val

    try:
        simplex = [f(x0)]
        for i in range(k):
            y = x0.copy()
            y[i] = y[i] * (1 + step) if y[i] != 0 else step
            if y[i] > hi[i]:
                y[i] = x0[i] * (1 - step) if x0[i] != 0 else -step
            simplex.append(f(y))
        while True:
            simplex.sort(key=lambda p: p[1])
            xb = simplex[0][0]
            if max(np.max(np.abs(p[0] - xb)) for p in simplex[1:]) < xatol:
                break
            centroid = np.mean([p[0] for p in simplex[:-1]], axis=0)
            xw, fw = simplex[-1]
            xr, fr = f(centroid + alpha * (centroid - xw))
            if simplex[0][1] <= fr < simplex[-2][1]:
                simplex[-1] = (xr, fr)
                continue
            if fr < simplex[0][1]:
                xe, fe = f(centroid + gamma * (xr - centroid))
                simplex[-1] = (xe, fe) if fe < fr else (xr, fr)
                continue
            if fr < fw:
                xc, fc = f(centroid + rho * (xr - centroid))
                if fc <= fr:
                    simplex[-1] = (xc, fc)
                    continue
            else:
                xc, fc = f(centroid + rho * (xw - centroid))
                if fc < fw:
                    simplex[-1] = (xc, fc)
                    continue
            x_best = simplex[0][0]
            simplex = [simplex[0]] + [f(x_best + sigma * (p[0] - x_best)) for p in simplex[1:]]
    except _BudgetExhausted:
        pass
    return OptimizeResult(best["x"], best["f"], len(history), history)
