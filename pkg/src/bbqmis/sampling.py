"""Maximal-independent-set samplers and the histogram they produce.

A sampler maps ``(graph, shots, seed)`` to a :class:`SampleHistogram` of
measured bitstrings. Histogram keys are masks over the graph's *local* vertex
indices, so bit ``i`` is vertex ``i`` of the input graph (qubit ``i`` of the
register for the emulator). The string form puts the highest vertex first.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

from . import kernels
from .graph import Graph


def derive_seed(seed: int, *keys: int) -> int:
    """Independent 63-bit seed for the stream identified by ``keys``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


@dataclass
class SampleHistogram:
    n: int
    counts: dict
    backend: str = ""
    seed: int = 0
    shots_requested: int = 0
    # device shots spent to produce this histogram, optimization included
    shots_consumed: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        limit = 1 << self.n
        for mask, c in self.counts.items():
            if not 0 <= mask < limit:
                raise ValueError(f"bitstring {mask:b} exceeds register width {self.n}")
            if c <= 0:
                raise ValueError("counts must be positive")
        if not self.shots_requested:
            self.shots_requested = self.shots
        if not self.shots_consumed:
            self.shots_consumed = self.shots

    @property
    def shots(self) -> int:
        return sum(self.counts.values())

    def bitstring(self, mask: int) -> str:
        return format(mask, f"0{self.n}b") if self.n else ""

    def most_common(self) -> list:
        """``(mask, count)`` pairs by count descending, then mask ascending."""
        return sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))

    def to_dict(self) -> dict:
        return {
            "shots": self.shots,
            "backend": self.backend,
            "seed": self.seed,
            "entries": {self.bitstring(m): c for m, c in self.most_common()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SampleHistogram":
        entries = d["entries"]
        n = len(next(iter(entries))) if entries else 0
        counts = {int(b, 2) if b else 0: int(c) for b, c in entries.items()}
        h = cls(n, counts, d.get("backend", ""), int(d.get("seed", 0)))
        if h.shots != int(d["shots"]):
            raise ValueError("entry counts do not sum to shots")
        return h


class MisSampler(Protocol):
    name: str

    def sample(self, g: Graph, shots: int, seed: int) -> SampleHistogram:
        ...


# shots drawn by the classical backends when the caller passes ``None``
DEFAULT_SHOTS = 1000


def _check_shots(shots):
    if shots is None:
        return DEFAULT_SHOTS
    if int(shots) < 1:
        raise ValueError("shots must be at least 1")
    return int(shots)


def enumerate_mis(g: Graph) -> list[int]:
    """Every maximal independent set of ``g`` as a label mask.

    Ordered by size descending, then mask ascending. The empty graph has the
    single maximal independent set ``0``.
    """
    return [g.to_labels(m) for m in kernels.maximal_independent_sets(g.adj, g.n)]


class ExactSampler:
    """Idealized sampler drawing directly from the maximal independent sets.

    With ``weighting="size"`` a set is drawn with probability proportional to
    its cardinality, so the mode tends to be a maximum independent set. When
    ``shots`` is at least the number of sets, every set receives one shot
    before the rest are drawn multinomially, making the support exact.
    """

    def __init__(self, weighting: str = "size"):
        if weighting not in ("size", "uniform"):
            raise ValueError(f"unknown weighting {weighting!r}")
        self.weighting = weighting
        self.name = "exact"

    def sample(self, g: Graph, shots: int, seed: int) -> SampleHistogram:
        shots = _check_shots(shots)
        sets = kernels.maximal_independent_sets(g.adj, g.n)
        if self.weighting == "size":
            w = np.array([m.bit_count() for m in sets], dtype=float)
        else:
            w = np.ones(len(sets))
        if w.sum() == 0:
            w[:] = 1.0
        p = w / w.sum()
        rng = np.random.default_rng(seed)
        if shots >= len(sets):
            draws = 1 + rng.multinomial(shots - len(sets), p)
        else:
            draws = rng.multinomial(shots, p)
        counts = {m: int(c) for m, c in zip(sets, draws) if c}
        return SampleHistogram(g.n, counts, self.name, seed, shots)


class RandomGreedySampler:
    """Each shot: random vertex order, then greedy independent-set growth."""

    def __init__(self):
        self.name = "rgreedy"

    def sample(self, g: Graph, shots: int, seed: int) -> SampleHistogram:
        shots = _check_shots(shots)
        rng = np.random.default_rng(seed)
        if g.n == 0:
            return SampleHistogram(0, {0: shots}, self.name, seed, shots)
        orders = rng.permuted(np.tile(np.arange(g.n), (shots, 1)), axis=1)
        counts = Counter(kernels.greedy_mis_batch(g.adj, orders))
        return SampleHistogram(g.n, dict(counts), self.name, seed, shots)


def exact_sampler(g: Graph, shots: int, seed: int) -> SampleHistogram:
    return ExactSampler().sample(g, shots, seed)


def random_greedy_sampler(g: Graph, shots: int, seed: int) -> SampleHistogram:
    return RandomGreedySampler().sample(g, shots, seed)


def _maximal_local(g: Graph, local: int) -> bool:
    covered = local
    rest = local
    while rest:
        low = rest & -rest
        row = g.adj[low.bit_length() - 1]
        if row & local:
            return False
        covered |= row
        rest ^= low
    return covered == (1 << g.n) - 1


def extract_candidates(h: SampleHistogram, g: Graph) -> list[int]:
    """Distinct maximal independent sets in ``h`` as label masks, most frequent first.

    Entries that are not independent, or independent but not maximal, are
    dropped.
    """
    if h.n != g.n:
        raise ValueError("histogram register width does not match the graph")
    return [g.to_labels(m) for m, _ in h.most_common() if _maximal_local(g, m)]
