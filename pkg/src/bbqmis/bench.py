"""Datasets, experiment sweeps, shot budgets and summaries."""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .bb import BBConfig, bbq_mis
from .coloring import SolveReport, exact_chromatic, greedy_it_mis, verify_coloring
from .emulator import QaoaConfig, QaoaSampler
from .graph import Graph, from_edges, graph_to_dict, load_graph, save_graph, unit_disk_graph
from .sampling import ExactSampler, RandomGreedySampler, derive_seed

log = logging.getLogger(__name__)

CSV_COLUMNS = ["instance", "n", "m", "solver", "sampler", "k", "chi", "nodes_explored",
               "shots", "wall_s", "terminated_by", "seed"]
SOLVERS = ("greedy", "bbq", "exact")
SAMPLERS = ("exact", "qaoa", "rgreedy")


class InfeasibleGeometry(RuntimeError):
    pass


@dataclass
class DatasetSpec:
    sizes: dict = field(default_factory=lambda: {n: 20 for n in range(10, 16)})
    side: float = 24.0
    radius: float = 7.5
    min_separation: float = 4.0
    seed: int = 0
    max_tries: int = 20000

    def __post_init__(self):
        self.sizes = {int(n): int(c) for n, c in self.sizes.items()}

    def to_dict(self) -> dict:
        d = asdict(self)
        d["sizes"] = {str(n): c for n, c in self.sizes.items()}
        return d

    @classmethod
    def from_dict(cls, d: dict | None) -> "DatasetSpec":
        d = d or {}
        return cls(**{k: v for k, v in d.items() if k in cls.__dataclass_fields__})


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    seen = frontier = 1
    while frontier:
        nxt = 0
        rest = frontier
        while rest:
            low = rest & -rest
            nxt |= g.adj[low.bit_length() - 1]
            rest ^= low
        frontier = nxt & ~seen
        seen |= nxt
    return seen == (1 << g.n) - 1


def random_udg(n: int, side: float, radius: float, min_separation: float, rng,
               max_tries: int = 20000, connected: bool = True) -> Graph:
    """Rejection-sample ``n`` points in a square until their unit-disk graph qualifies."""
    for _ in range(max_tries):
        pts = []
        for _ in range(200 * n):
            p = rng.uniform(0.0, side, 2)
            if all(math.dist(p, q) >= min_separation for q in pts):
                pts.append((float(p[0]), float(p[1])))
                if len(pts) == n:
                    break
        if len(pts) < n:
            continue
        g = unit_disk_graph(pts, radius)
        if not connected or is_connected(g):
            return g
    raise InfeasibleGeometry(f"no connected unit-disk graph with n={n} after {max_tries} tries")


def gnp_graph(n: int, p: float, rng) -> Graph:
    iu = np.triu_indices(n, 1)
    keep = rng.random(iu[0].size) < p
    return from_edges(n, zip(iu[0][keep].tolist(), iu[1][keep].tolist()))


def generate_dataset(spec: DatasetSpec) -> list:
    """``[(instance_id, graph), ...]``; each instance has its own seeded stream."""
    out = []
    for n in sorted(spec.sizes):
        for i in range(spec.sizes[n]):
            rng = np.random.default_rng(derive_seed(spec.seed, n, i))
            g = random_udg(n, spec.side, spec.radius, spec.min_separation, rng, spec.max_tries)
            out.append((f"udg_n{n:02d}_{i:03d}", g))
    return out


def write_dataset(dataset, outdir, spec: DatasetSpec | None = None) -> None:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, g in dataset:
        save_graph(g, outdir / f"{name}.json")
    if spec is not None:
        (outdir / "dataset.json").write_text(json.dumps(spec.to_dict(), indent=2, sort_keys=True) + "\n")


def read_dataset(indir) -> list:
    indir = Path(indir)
    return [(p.stem, load_graph(p)) for p in sorted(indir.glob("*.json"))
            if p.name != "dataset.json" and not p.name.endswith(".chi.json")]


def make_sampler(name: str, qaoa: QaoaConfig | None = None):
    if name == "exact":
        return ExactSampler()
    if name == "rgreedy":
        return RandomGreedySampler()
    if name == "qaoa":
        return QaoaSampler(qaoa)
    raise ValueError(f"unknown sampler {name!r}")


def solve(g: Graph, solver: str, sampler: str = "exact", seed: int = 0,
          bb: BBConfig | None = None, qaoa: QaoaConfig | None = None,
          shots: int | None = None) -> SolveReport:
    """Run one solver on one graph and return its report."""
    if solver == "exact":
        t0 = time.perf_counter()
        _, col = exact_chromatic(g)
        return SolveReport(col, "exact", "", wall_time=time.perf_counter() - t0)
    smp = make_sampler(sampler, qaoa)
    if solver == "greedy":
        _, rep = greedy_it_mis(g, smp, shots, seed)
    elif solver == "bbq":
        bb = BBConfig.from_dict({**(bb.to_dict() if bb else {}), "seed": seed})
        if shots is not None:
            bb.shots = shots
        _, rep = bbq_mis(g, smp, bb)
    else:
        raise ValueError(f"unknown solver {solver!r}")
    return rep


@dataclass
class ExperimentRow:
    instance: str
    n: int
    m: int
    solver: str
    sampler: str
    k: int | None
    chi: int
    nodes_explored: int
    shots: int
    wall_s: float
    terminated_by: str
    seed: int
    error: str = ""

    def csv_values(self, timing: bool = True) -> list:
        wall = f"{self.wall_s:.4f}" if timing else "0"
        k = "" if self.k is None else self.k
        return [self.instance, self.n, self.m, self.solver, self.sampler, k, self.chi,
                self.nodes_explored, self.shots, wall, self.terminated_by, self.seed]


def _run_instance(task):
    name, gdict, chi, combos, seed, bb, qaoa, shots = task
    from .graph import graph_from_dict

    g = graph_from_dict(gdict)
    if chi is None:
        chi, _ = exact_chromatic(g)
    rows = []
    for solver, sampler in combos:
        smp_label = "" if solver == "exact" else sampler
        try:
            rep = solve(g, solver, sampler, seed, BBConfig.from_dict(bb), QaoaConfig.from_dict(qaoa), shots)
            if not verify_coloring(g, rep.best):
                raise RuntimeError("returned coloring failed verification")
            rows.append(ExperimentRow(name, g.n, g.m, solver, smp_label, rep.k, chi,
                                      rep.nodes_explored, rep.shots_consumed, rep.wall_time,
                                      rep.terminated_by, seed))
        except Exception as exc:  # a failed run is recorded, the sweep goes on
            log.warning("%s %s/%s failed: %s", name, solver, sampler, exc)
            rows.append(ExperimentRow(name, g.n, g.m, solver, smp_label, None, chi, 0, 0, 0.0,
                                      "error", seed, f"{type(exc).__name__}: {exc}"))
    return chi, rows


def run_experiment(dataset, solvers=("greedy", "bbq"), samplers=("exact",), parallel: int = 1,
                   seed: int = 0, bb: BBConfig | None = None, qaoa: QaoaConfig | None = None,
                   shots: int | None = None, chi_cache: dict | None = None) -> list:
    """Run every (instance, solver, sampler) combination.

    Instances are dispatched to up to ``parallel`` worker processes; rows come
    back in canonical (instance, solver, sampler) order. ``chi_cache`` maps
    instance ids to known chromatic numbers and is filled in place.
    """
    if not dataset:
        raise ValueError("empty dataset")
    chi_cache = {} if chi_cache is None else chi_cache
    combos = []
    for solver in solvers:
        if solver == "exact":
            combos.append((solver, ""))
        else:
            combos.extend((solver, s) for s in samplers)
    bb_d = bb.to_dict() if bb else BBConfig().to_dict()
    # frontier workers share the process budget with instance workers
    bb_d["workers"] = max(1, min(bb_d.get("workers", 1), parallel))
    qaoa_d = qaoa.to_dict() if qaoa else None
    tasks = [(name, graph_to_dict(g), chi_cache.get(name), combos, seed, bb_d, qaoa_d, shots)
             for name, g in dataset]
    if parallel > 1:
        with ProcessPoolExecutor(min(parallel, len(tasks))) as ex:
            results = list(ex.map(_run_instance, tasks))
    else:
        results = [_run_instance(t) for t in tasks]
    rows = []
    for (name, _), (chi, inst_rows) in zip(dataset, results):
        chi_cache[name] = chi
        rows.extend(inst_rows)
    return rows


def write_rows_csv(rows, path=None, timing: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(r.csv_values(timing))
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def read_rows_csv(path) -> list:
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            rows.append(ExperimentRow(
                rec["instance"], int(rec["n"]), int(rec["m"]), rec["solver"], rec["sampler"],
                int(rec["k"]) if rec["k"] else None, int(rec["chi"]), int(rec["nodes_explored"]),
                int(rec["shots"]), float(rec["wall_s"]), rec["terminated_by"], int(rec["seed"])))
    return rows


def shot_budget(nodes_explored, cfg: QaoaConfig | None = None, rate_hz: float = 5.0):
    """Device shots for a QAOA-backed solve and the QPU time they take at ``rate_hz``.

    Every explored node runs ``max_evals`` optimizer evaluations of
    ``eval_shots`` shots plus ``final_shots`` for the final histogram.
    """
    cfg = cfg or QaoaConfig()
    if isinstance(nodes_explored, SolveReport):
        nodes_explored = nodes_explored.nodes_explored
    shots = int(nodes_explored) * (cfg.max_evals * cfg.eval_shots + cfg.final_shots)
    return shots, shots / rate_hz


def _series_name(solver, sampler, multi):
    return f"{solver}:{sampler}" if multi and sampler else solver


def report(rows) -> tuple:
    """Summary dict and plot-ready per-instance table ``(header, records)``."""
    if not rows:
        raise ValueError("no rows")
    samplers = {r.sampler for r in rows if r.sampler}
    multi = len(samplers) > 1
    by_series = {}
    for r in rows:
        by_series.setdefault(_series_name(r.solver, r.sampler, multi), []).append(r)
    summary = {"instances": len({r.instance for r in rows}), "rows": len(rows), "series": {}}
    for name, rs in sorted(by_series.items()):
        ok = [r for r in rs if r.k is not None]
        gaps = [r.k - r.chi for r in ok]
        nodes = Counter(r.nodes_explored for r in ok)
        summary["series"][name] = {
            "runs": len(rs),
            "errors": len(rs) - len(ok),
            "optimal": sum(1 for x in gaps if x == 0),
            "optimality_rate": (sum(1 for x in gaps if x == 0) / len(ok)) if ok else 0.0,
            "worse": sum(1 for x in gaps if x > 0),
            "max_gap": max(gaps, default=0),
            "gap_histogram": {str(k): v for k, v in sorted(Counter(gaps).items())},
            "nodes_explored_histogram": {str(k): v for k, v in sorted(nodes.items())},
            "max_nodes_explored": max(nodes, default=0),
            "shots": sum(r.shots for r in ok),
        }
    instances = []
    table = {}
    for r in rows:
        if r.instance not in table:
            instances.append(r.instance)
            table[r.instance] = {"instance": r.instance, "n": r.n, "oracle": r.chi}
        table[r.instance][_series_name(r.solver, r.sampler, multi)] = "" if r.k is None else r.k
    header = ["instance", "n"] + sorted(by_series) + ["oracle"]
    return summary, (header, [table[i] for i in instances])


def write_report(rows, out_json, out_csv=None) -> dict:
    summary, (header, records) = report(rows)
    Path(out_json).write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    if out_csv is None:
        out_csv = os.path.splitext(str(out_json))[0] + ".csv"
    with open(out_csv, "w", newline="") as fh:
        w = csv.DictWriter(fh, header, lineterminator="\n")
        w.writeheader()
        for rec in records:
            w.writerow({h: rec.get(h, "") for h in header})
    return summary
