"""Colorings, the exact chromatic oracle and the greedy iterated-MIS heuristic."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import kernels
from .graph import Graph, induced_remove, is_independent, members
from .sampling import MisSampler, derive_seed, random_greedy_sampler

ORACLE_MAX_N = 25


@dataclass(frozen=True)
class Coloring:
    """Color classes as label masks; class ``i`` is color ``i``."""

    classes: tuple

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(int(c) for c in self.classes))

    @property
    def k(self) -> int:
        return sum(1 for c in self.classes if c)

    def color_of(self) -> dict:
        return {lab: i for i, c in enumerate(self.classes) for lab in members(c)}

    def to_dict(self) -> dict:
        return {"k": self.k, "classes": [members(c) for c in self.classes]}

    @classmethod
    def from_dict(cls, d: dict) -> "Coloring":
        return cls(tuple(sum(1 << v for v in c) for c in d["classes"]))


@dataclass
class SolveReport:
    best: Coloring
    solver: str = ""
    sampler: str = ""
    nodes_explored: int = 0
    nodes_pruned: dict = field(default_factory=lambda: {"non_improving": 0, "unfeasible": 0, "redundant": 0})
    shots_consumed: int = 0
    wall_time: float = 0.0
    terminated_by: str = "optimality"
    leaves: int = 0
    first_leaf_k: int | None = None
    incumbent_trace: list = field(default_factory=list)
    trace: list = field(default_factory=list)
    config: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return self.best.k

    def to_dict(self) -> dict:
        return {
            "solver": self.solver,
            "sampler": self.sampler,
            "k": self.k,
            "coloring": self.best.to_dict(),
            "nodes_explored": self.nodes_explored,
            "nodes_pruned": dict(self.nodes_pruned),
            "shots_consumed": self.shots_consumed,
            "wall_time": self.wall_time,
            "terminated_by": self.terminated_by,
            "leaves": self.leaves,
            "first_leaf_k": self.first_leaf_k,
            "incumbent_trace": list(self.incumbent_trace),
            "trace": list(self.trace),
            "config": dict(self.config),
        }


def verify_coloring(g: Graph, c: Coloring) -> bool:
    """True iff the classes partition the vertices of ``g`` into independent sets."""
    seen = 0
    for cls in c.classes:
        if cls & seen:
            return False
        seen |= cls
        try:
            if not is_independent(g, cls):
                return False
        except ValueError:
            return False
    return seen == g.vertices


def worst_case_completion(inherited, subgraph: Graph) -> Coloring:
    """Inherited classes followed by one singleton class per remaining vertex."""
    used = 0
    for cls in inherited:
        if cls & used:
            raise ValueError("inherited classes overlap")
        used |= cls
    if used & subgraph.vertices:
        raise ValueError("inherited classes overlap the subgraph")
    return Coloring(tuple(inherited) + tuple(1 << lab for lab in subgraph.labels))


def exact_chromatic(g: Graph, lb_hint: int | None = None, ub_hint: int | None = None):
    """Chromatic number and an optimal coloring by DSATUR branch and bound.

    Hints must be valid bounds; without them the search is self-contained.
    """
    if g.n > ORACLE_MAX_N:
        raise ValueError(f"exact oracle limited to {ORACLE_MAX_N} vertices, got {g.n}")
    if g.n == 0:
        return 0, Coloring(())
    lb = lb_hint if lb_hint is not None else (2 if g.m else 1)
    k, colors = kernels.chromatic_number(g.adj, g.n, lb, ub_hint)
    classes = [0] * k
    for v, c in enumerate(colors):
        classes[c] |= 1 << g.labels[v]
    return k, Coloring(tuple(classes))


def _augment(g: Graph, local: int) -> int:
    """Grow an independent local mask to a maximal one, lowest index first."""
    blocked = local
    rest = local
    while rest:
        low = rest & -rest
        blocked |= g.adj[low.bit_length() - 1]
        rest ^= low
    for v in range(g.n):
        if not blocked >> v & 1:
            local |= 1 << v
            blocked |= g.adj[v] | 1 << v
    return local


def greedy_it_mis(g: Graph, sampler: MisSampler, shots: int | None = None, seed: int = 0):
    """Color by repeatedly removing the sampler's most frequent independent set.

    The chosen set is grown to a maximal one if needed; if the histogram has
    no independent entry at all a random greedy maximal set is used instead.
    Returns ``(coloring, report)``.
    """
    if g.n < 1:
        raise ValueError("graph must have at least one vertex")
    t0 = time.perf_counter()
    h_graph = g
    classes = []
    calls = shots_used = fallbacks = 0
    while h_graph.n:
        if h_graph.m:
            h = sampler.sample(h_graph, shots, derive_seed(seed, 2, calls))
            calls += 1
            shots_used += h.shots_consumed
            pick = None
            for z, _ in h.most_common():
                if is_independent(h_graph, h_graph.to_labels(z)):
                    pick = _augment(h_graph, z)
                    break
            if pick is None:
                fallbacks += 1
                fb = random_greedy_sampler(h_graph, 1, derive_seed(seed, 3, calls))
                pick = next(iter(fb.counts))
            mis = h_graph.to_labels(pick)
            h_graph = induced_remove(h_graph, mis)
        else:
            mis = h_graph.vertices
            h_graph = induced_remove(h_graph, mis)
        classes.append(mis)
    best = Coloring(tuple(classes))
    report = SolveReport(best, "greedy", getattr(sampler, "name", ""), nodes_explored=calls,
                         shots_consumed=shots_used, wall_time=time.perf_counter() - t0,
                         terminated_by="complete", config={"shots": shots, "seed": seed,
                                                           "fallbacks": fallbacks})
    return best, report


def _optimal_colorings(g: Graph, k: int):
    """Yield every partition of ``g`` into ``k`` independent classes (local masks)."""
    n = g.n
    classes = [0] * k

    def rec(v, used):
        if n - v < k - used:
            return
        if v == n:
            yield tuple(classes)
            return
        bit = 1 << v
        for c in range(min(used + 1, k)):
            if g.adj[v] & classes[c]:
                continue
            classes[c] |= bit
            yield from rec(v + 1, max(used, c + 1))
            classes[c] ^= bit

    yield from rec(0, 0)


def theorem1_check(g: Graph, max_n: int = 10) -> bool:
    """Brute force: does some optimal coloring of ``g`` have a maximal independent class?"""
    if g.n > max_n:
        raise ValueError(f"brute force limited to {max_n} vertices")
    if g.n == 0:
        return True
    full = (1 << g.n) - 1
    for k in range(1, g.n + 1):
        found = False
        for parts in _optimal_colorings(g, k):
            found = True
            for cls in parts:
                covered = cls
                for v in members(cls):
                    covered |= g.adj[v]
                if covered == full:
                    return True
        if found:
            return False
    return False
