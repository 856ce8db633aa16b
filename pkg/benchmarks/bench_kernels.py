"""Compare the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from bbqmis import _pykernels
from bbqmis.bench import random_udg

try:
    from bbqmis import _kernels
except ImportError:
    _kernels = None


def workloads(seed=0):
    rng = np.random.default_rng(seed)
    graphs = [random_udg(15, 24.0, 7.5, 4.0, rng) for _ in range(10)]
    dense = [random_udg(24, 20.0, 7.5, 3.0, rng) for _ in range(3)]
    mats = [g.adjacency_matrix().astype(float) for g in graphs]
    big = rng.standard_normal((40, 40))
    big = big + big.T
    orders = rng.permuted(np.tile(np.arange(15), (1000, 1)), axis=1)
    return {
        "mis_enumeration n=15 x10": lambda k: [k.maximal_independent_sets(g.adj, g.n) for g in graphs],
        "chromatic n=24 x3": lambda k: [k.chromatic_number(g.adj, g.n) for g in dense],
        "greedy_mis 1000 shots": lambda k: k.greedy_mis_batch(graphs[0].adj, orders),
        "jacobi 15x15 x10": lambda k: [k.jacobi_eigh(m) for m in mats],
        "jacobi 40x40": lambda k: k.jacobi_eigh(big),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled kernels not built; only the fallback is timed")
    print(f"{'workload':28s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for name, fn in workloads().items():
        tp = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        if _kernels is None:
            print(f"{name:28s} {tp * 1e3:9.2f}ms {'-':>10s} {'-':>8s}")
            continue
        tc = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat))
        print(f"{name:28s} {tp * 1e3:9.2f}ms {tc * 1e3:9.2f}ms {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
