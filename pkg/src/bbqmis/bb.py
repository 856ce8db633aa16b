"""Branch and bound over sampled maximal independent sets.

Each node holds an induced subgraph ``H`` of the input graph together with the
maximal independent sets removed on the way down (one color each). Children
come from the maximal independent sets the sampler reports for ``H``; a child
whose subgraph has no edges closes with a single extra color and is a leaf.

Parallel mode explores the frontier in synchronous batches: up to ``workers``
nodes are popped, sampled concurrently, and their children merged in pop
order, so a given ``(seed, workers)`` pair always yields the same tree.
"""
from __future__ import annotations

import heapq
import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

from .bounds import bounds_report
from .coloring import Coloring, SolveReport, worst_case_completion
from .graph import Graph, fingerprint, induced_remove
from .sampling import MisSampler, derive_seed, extract_candidates

EXPLORATION_POLICIES = ("priority", "fifo", "dfs", "gap")


@dataclass
class BBConfig:
    node_budget: int | None = 50
    shots: int | None = None
    lb_rounding: str = "floor"
    seed: int = 0
    exploration: str = "priority"
    prune_bound: bool = True
    prune_redundancy: bool = True
    workers: int = 1
    record_trace: bool = True

    def __post_init__(self):
        if self.exploration not in EXPLORATION_POLICIES:
            raise ValueError(f"unknown exploration policy {self.exploration!r}")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.node_budget is not None and self.node_budget < 1:
            raise ValueError("node_budget must be positive or None")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict | None) -> "BBConfig":
        d = d or {}
        return cls(**{k: v for k, v in d.items() if k in cls.__dataclass_fields__})


@dataclass
class BBNode:
    id: int
    parent: int | None
    subgraph: Graph
    inherited: tuple
    depth: int
    lb: int
    ub: int
    priority: int
    fingerprint: int
    children: list = field(default_factory=list, repr=False)

    @property
    def k(self) -> int:
        return self.depth + self.subgraph.n

    @property
    def coloring(self) -> Coloring:
        return worst_case_completion(self.inherited, self.subgraph)


def _make_node(node_id, parent, subgraph, inherited, cfg):
    depth = len(inherited)
    if subgraph.n:
        rep = bounds_report(subgraph, cfg.lb_rounding)
        lb, ub = rep.combined_lb, rep.combined_ub
    else:
        lb = ub = 0
    return BBNode(node_id, parent, subgraph, tuple(inherited), depth, depth + lb, ub,
                  -ub * subgraph.m, fingerprint(subgraph))


def _key(node, policy, seq):
    if policy == "priority":
        return (-node.priority, seq)
    if policy == "fifo":
        return (seq,)
    if policy == "dfs":
        return (-seq,)
    return (node.depth + node.ub - node.lb, seq)


def bbq_mis(g: Graph, sampler: MisSampler, cfg: BBConfig | None = None):
    """Minimize the color count by branching on sampled maximal independent sets.

    Returns ``(coloring, report)``. With a sampler that reports every maximal
    independent set and no node budget the result is optimal; otherwise it is
    the best feasible coloring found.
    """
    cfg = cfg or BBConfig()
    if g.n < 1:
        raise ValueError("graph must have at least one vertex")
    t0 = time.perf_counter()
    ids = itertools.count()
    seq = itertools.count()
    report = SolveReport(Coloring(()), "bbq", getattr(sampler, "name", ""), config=cfg.to_dict())
    pruned = report.nodes_pruned
    trace = report.trace if cfg.record_trace else None

    def log(node, action, **extra):
        if trace is not None:
            trace.append({"id": node.id, "parent": node.parent, "depth": node.depth,
                          "priority": node.priority, "lb": node.lb, "ub": node.ub,
                          "action": action, **extra})

    root = _make_node(next(ids), None, g, (), cfg)
    incumbent = root.coloring
    report.incumbent_trace.append(incumbent.k)
    # fingerprint -> shallowest depth at which that subgraph was generated
    seen = {root.fingerprint: 0}
    heap = []

    def offer_leaf(node_id, parent, sub, inherited):
        nonlocal incumbent
        classes = tuple(inherited) + ((sub.vertices,) if sub.n else ())
        leaf = Coloring(classes)
        report.leaves += 1
        if report.first_leaf_k is None:
            report.first_leaf_k = leaf.k
        if trace is not None:
            trace.append({"id": node_id, "parent": parent, "depth": len(inherited),
                          "priority": 0, "lb": leaf.k, "ub": 0, "action": "leaf", "k": leaf.k})
        if leaf.k < incumbent.k:
            incumbent = leaf
            report.incumbent_trace.append(leaf.k)

    if g.m == 0:
        offer_leaf(root.id, None, g, ())
    else:
        heapq.heappush(heap, (_key(root, cfg.exploration, next(seq)), root))

    pool = ThreadPoolExecutor(cfg.workers) if cfg.workers > 1 else None
    budget = cfg.node_budget
    terminated = "optimality"
    try:
        while heap:
            batch = []
            while heap and len(batch) < cfg.workers:
                _, node = heapq.heappop(heap)
                if cfg.prune_bound and node.lb >= incumbent.k:
                    pruned["non_improving"] += 1
                    log(node, "pruned_non_improving")
                    continue
                if budget is not None and report.nodes_explored + len(batch) >= budget:
                    heapq.heappush(heap, (_key(node, cfg.exploration, -1), node))
                    break
                batch.append(node)
            if not batch:
                if heap:
                    terminated = "node_budget"
                break
            report.nodes_explored += len(batch)

            def draw(node):
                return sampler.sample(node.subgraph, cfg.shots, derive_seed(cfg.seed, 1, node.id))

            hists = list(pool.map(draw, batch)) if pool else [draw(batch[0])]
            for node, h in zip(batch, hists):
                report.shots_consumed += h.shots_consumed
                cands = extract_candidates(h, node.subgraph)
                pruned["unfeasible"] += len(h.counts) - len(cands)
                log(node, "explored", candidates=len(cands), incumbent=incumbent.k)
                for cand in cands:
                    sub = induced_remove(node.subgraph, cand)
                    fp = fingerprint(sub)
                    depth = node.depth + 1
                    if cfg.prune_redundancy and seen.get(fp, depth + 1) <= depth:
                        pruned["redundant"] += 1
                        continue
                    seen[fp] = min(depth, seen.get(fp, depth))
                    inherited = node.inherited + (cand,)
                    if sub.m == 0:
                        offer_leaf(next(ids), node.id, sub, inherited)
                        continue
                    child = _make_node(next(ids), node.id, sub, inherited, cfg)
                    if cfg.prune_bound and child.lb >= incumbent.k:
                        pruned["non_improving"] += 1
                        log(child, "pruned_non_improving")
                        continue
                    heapq.heappush(heap, (_key(child, cfg.exploration, next(seq)), child))
    finally:
        if pool:
            pool.shutdown()

    report.best = incumbent
    report.terminated_by = terminated
    report.wall_time = time.perf_counter() - t0
    return incumbent, report
