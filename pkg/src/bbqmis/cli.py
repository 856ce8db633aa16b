"""Command line entry point: ``bbqmis gen|solve|bench|budget|report``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import bench
from .bb import BBConfig
from .coloring import verify_coloring
from .emulator import QaoaConfig
from .graph import load_graph


def _load_json(path):
    if path is None:
        return {}
    with open(path) as fh:
        return json.load(fh)


def _dump(obj, out):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_gen(args):
    spec = bench.DatasetSpec.from_dict(_load_json(args.spec))
    try:
        dataset = bench.generate_dataset(spec)
    except bench.InfeasibleGeometry as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    bench.write_dataset(dataset, args.out, spec)
    print(f"wrote {len(dataset)} graphs to {args.out}", file=sys.stderr)
    return 0


def cmd_solve(args):
    g = load_graph(args.graph)
    cfg = _load_json(args.config)
    rep = bench.solve(g, args.solver, args.sampler, args.seed,
                      BBConfig.from_dict(cfg.get("bb")), QaoaConfig.from_dict(cfg.get("qaoa")),
                      cfg.get("shots"))
    if not verify_coloring(g, rep.best):
        print("error: solver returned an infeasible coloring", file=sys.stderr)
        return 1
    out = rep.to_dict()
    out["seed"] = args.seed
    if args.sampler == "qaoa" or cfg.get("qaoa"):
        out["qaoa"] = QaoaConfig.from_dict(cfg.get("qaoa")).to_dict()
    _dump(out, args.out)
    return 0


def _chi_path(dataset_dir, name):
    return Path(dataset_dir) / f"{name}.chi.json"


def cmd_bench(args):
    dataset = bench.read_dataset(args.dataset)
    if not dataset:
        print(f"error: no graphs in {args.dataset}", file=sys.stderr)
        return 2
    matrix = _load_json(args.matrix)
    cache = {}
    for name, _ in dataset:
        p = _chi_path(args.dataset, name)
        if p.exists():
            cache[name] = int(json.loads(p.read_text())["chi"])
    known = set(cache)
    rows = bench.run_experiment(
        dataset,
        solvers=matrix.get("solvers", ["greedy", "bbq"]),
        samplers=matrix.get("samplers", ["exact"]),
        parallel=args.parallel,
        seed=matrix.get("seed", 0) if args.seed is None else args.seed,
        bb=BBConfig.from_dict(matrix.get("bb")),
        qaoa=QaoaConfig.from_dict(matrix.get("qaoa")),
        shots=matrix.get("shots"),
        chi_cache=cache,
    )
    for name in set(cache) - known:
        try:
            _chi_path(args.dataset, name).write_text(json.dumps({"chi": cache[name]}) + "\n")
        except OSError:
            pass
    bench.write_rows_csv(rows, args.out, timing=not args.no_timing)
    failed = [r for r in rows if r.error]
    for r in failed:
        print(f"failed: {r.instance} {r.solver}/{r.sampler}: {r.error}", file=sys.stderr)
    return 1 if failed and args.strict else 0


def cmd_budget(args):
    if args.nodes is not None:
        nodes = args.nodes
        qcfg = {}
    else:
        rep = _load_json(args.report)
        nodes = int(rep["nodes_explored"])
        qcfg = rep.get("qaoa", {})
    if args.config:
        qcfg = _load_json(args.config).get("qaoa", qcfg)
    cfg = QaoaConfig.from_dict(qcfg)
    shots, seconds = bench.shot_budget(nodes, cfg, args.rate_hz)
    _dump({"nodes_explored": nodes, "shots": shots, "rate_hz": args.rate_hz,
           "seconds": seconds, "hours": seconds / 3600.0}, args.out)
    return 0


def cmd_report(args):
    rows = bench.read_rows_csv(args.inp)
    if not rows:
        print(f"error: no rows in {args.inp}", file=sys.stderr)
        return 2
    bench.write_report(rows, args.out, args.csv)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="bbqmis", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", help="generate a unit-disk graph dataset")
    s.add_argument("--spec", help="dataset spec JSON (defaults if omitted)")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="color one graph")
    s.add_argument("--graph", required=True)
    s.add_argument("--solver", choices=bench.SOLVERS, default="bbq")
    s.add_argument("--sampler", choices=bench.SAMPLERS, default="exact")
    s.add_argument("--config", help='JSON with optional "bb", "qaoa" and "shots" entries')
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("bench", help="run a solver x sampler sweep over a dataset")
    s.add_argument("--dataset", required=True)
    s.add_argument("--matrix", help='JSON with "solvers", "samplers", "seed", "bb", "qaoa", "shots"')
    s.add_argument("--parallel", type=int, default=1)
    s.add_argument("--seed", type=int)
    s.add_argument("--out", required=True)
    s.add_argument("--strict", action="store_true", help="exit nonzero if any row failed")
    s.add_argument("--no-timing", action="store_true", help="write wall_s as 0 for byte-stable output")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("budget", help="device shots and QPU time for a QAOA-backed solve")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--report")
    g.add_argument("--nodes", type=int)
    s.add_argument("--config", help='JSON with a "qaoa" entry')
    s.add_argument("--rate-hz", type=float, default=5.0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_budget)

    s = sub.add_parser("report", help="summarize a results CSV")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--csv", help="plot-ready per-instance CSV (default: next to --out)")
    s.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "parallel", 1) < 1:
        print("error: --parallel must be at least 1", file=sys.stderr)
        return 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
