"""Chromatic-number bounds from the adjacency spectrum and degree sequence."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .graph import Graph, degrees

# slack absorbing eigensolver round-off before integer rounding
_ROUND_EPS = 1e-9


@dataclass(frozen=True)
class SpectrumSummary:
    eigenvalues: tuple
    inertia: tuple
    vectors: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    @property
    def n(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True)
class BoundsReport:
    lb_hoffman: Optional[float]
    lb_ew: Optional[float]
    lb_ee: Optional[float]
    ub_greedy: int
    ub_wp: int
    combined_lb: int
    combined_ub: int

    def to_dict(self) -> dict:
        return asdict(self)


def spectrum(g: Graph, zero_tol: float | None = None) -> SpectrumSummary:
    """Eigenvalues (descending), eigenvectors and inertia of the adjacency matrix.

    Eigenvalues with ``|λ| <= zero_tol`` count as zero; the default tolerance
    is ``1e-8 * max|λ|``.
    """
    if g.n < 1:
        raise ValueError("spectrum of an empty graph")
    w, v = kernels.jacobi_eigh(g.adjacency_matrix())
    if zero_tol is None:
        zero_tol = 1e-8 * float(np.max(np.abs(w)))
    n_plus = int(np.sum(w > zero_tol))
    n_minus = int(np.sum(w < -zero_tol))
    inertia = (n_plus, g.n - n_plus - n_minus, n_minus)
    return SpectrumSummary(tuple(float(x) for x in w), inertia, v)


def lower_bounds(s: SpectrumSummary, n: int):
    """Hoffman, Elphick-Wocjan and Edwards-Elphick lower bounds.

    Each entry is ``None`` when the bound is undefined for the spectrum.
    """
    if n < 1:
        raise ValueError("n must be positive")
    lam1, lamn = s.eigenvalues[0], s.eigenvalues[-1]
    n_plus, _, n_minus = s.inertia
    lb_h = 1.0 - lam1 / lamn if n_minus > 0 else None
    lb_ew = 1.0 + max(n_plus / n_minus, n_minus / n_plus) if n_plus and n_minus else None
    lb_ee = n / (n - lam1) if n - lam1 > 0 else None
    return lb_h, lb_ew, lb_ee


def upper_bounds(g: Graph):
    """Greedy (Δ+1) and Welsh-Powell upper bounds."""
    if g.n < 1:
        raise ValueError("upper bounds of an empty graph")
    deg, dmax = degrees(g)
    ordered = sorted(deg, reverse=True)
    ub_wp = max(min(d + 1, i) for i, d in enumerate(ordered, start=1))
    return dmax + 1, ub_wp


def _round(x: float, mode: str) -> int:
    if mode == "floor":
        return math.floor(x + _ROUND_EPS)
    if mode == "ceil":
        return math.ceil(x - _ROUND_EPS)
    raise ValueError(f"unknown lb_rounding {mode!r}")


def combine(lb_h, lb_ew, lb_ee, ub_g, ub_wp, has_edges: bool, lb_rounding: str = "floor"):
    """Tightest integer lower bound over the available ones, and min of the upper bounds."""
    lbs = [_round(x, lb_rounding) for x in (lb_h, lb_ew, lb_ee) if x is not None]
    lb = max(lbs, default=1)
    lb = max(lb, 2 if has_edges else 1)
    return lb, min(int(ub_g), int(ub_wp))


def bounds_report(g: Graph, lb_rounding: str = "floor", zero_tol: float | None = None) -> BoundsReport:
    if g.n < 1:
        raise ValueError("bounds of an empty graph")
    if g.m == 0:
        return BoundsReport(None, None, None, 1, 1, 1, 1)
    s = spectrum(g, zero_tol)
    lb_h, lb_ew, lb_ee = lower_bounds(s, g.n)
    ub_g, ub_wp = upper_bounds(g)
    lb, ub = combine(lb_h, lb_ew, lb_ee, ub_g, ub_wp, True, lb_rounding)
    return BoundsReport(lb_h, lb_ew, lb_ee, ub_g, ub_wp, lb, ub)
