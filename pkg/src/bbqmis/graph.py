"""Undirected simple graphs over bitset adjacency rows.

Vertices carry *labels*: their index in the root graph. Labels survive
:func:`induced_remove`, so vertex sets, colorings and fingerprints are all
expressed as bitmasks over root labels and compose across subgraphs. A vertex
set is a plain ``int`` whose bit ``l`` is set iff label ``l`` is a member.
"""
from __future__ import annotations

import json
import math
from itertools import combinations
from typing import Iterable, Sequence


def vertex_set(labels: Iterable[int]) -> int:
    """Bitmask of the given labels."""
    mask = 0
    for label in labels:
        mask |= 1 << int(label)
    return mask


def members(mask: int) -> list[int]:
    """Labels present in ``mask``, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class Graph:
    """Immutable undirected graph.

    Parameters
    ----------
    adj : sequence of int
        ``adj[i]`` has bit ``j`` set iff local vertices ``i`` and ``j`` are
        adjacent. Must be symmetric with an empty diagonal.
    labels : sequence of int, optional
        Strictly increasing root labels of the local vertices; defaults to
        ``0..n-1``.
    coords : sequence of (x, y), optional
        Vertex positions in µm.
    """

    __slots__ = ("n", "adj", "labels", "coords", "_index", "_m")

    def __init__(self, adj: Sequence[int], labels: Sequence[int] | None = None,
                 coords: Sequence[Sequence[float]] | None = None):
        adj = tuple(int(a) for a in adj)
        n = len(adj)
        labels = tuple(range(n)) if labels is None else tuple(int(x) for x in labels)
        if len(labels) != n:
            raise ValueError("labels must have one entry per vertex")
        if any(b <= a for a, b in zip(labels, labels[1:])) or (labels and labels[0] < 0):
            raise ValueError("labels must be non-negative and strictly increasing")
        full = (1 << n) - 1
        for i, row in enumerate(adj):
            if row & ~full or row >> i & 1:
                raise ValueError(f"invalid adjacency row for vertex {i}")
            rest = row
            while rest:
                low = rest & -rest
                j = low.bit_length() - 1
                if not adj[j] >> i & 1:
                    raise ValueError(f"adjacency is not symmetric at ({i}, {j})")
                rest ^= low
        if coords is not None:
            coords = tuple((float(x), float(y)) for x, y in coords)
            if len(coords) != n:
                raise ValueError("coords must have one entry per vertex")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "adj", adj)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(labels)})
        object.__setattr__(self, "_m", sum(a.bit_count() for a in adj) // 2)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    def __reduce__(self):
        return (Graph, (self.adj, self.labels, self.coords))

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.adj, self.labels, self.coords) == (other.adj, other.labels, other.coords)

    def __hash__(self):
        return hash((self.adj, self.labels))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m}, labels={list(self.labels)})"

    @property
    def m(self) -> int:
        """Number of edges."""
        return self._m

    @property
    def vertices(self) -> int:
        """Vertex set of the graph as a label mask."""
        return vertex_set(self.labels)

    def edges(self) -> list[tuple[int, int]]:
        """Edges as sorted local index pairs, lexicographic."""
        out = []
        for i, row in enumerate(self.adj):
            for j in members(row >> (i + 1) << (i + 1)):
                out.append((i, j))
        return out

    def to_local(self, s: int) -> int:
        """Translate a label mask to a mask over local indices."""
        if s < 0:
            raise ValueError("vertex set must be a non-negative bitmask")
        if self.labels == tuple(range(self.n)):
            if s >> self.n:
                raise ValueError(f"unknown labels {members(s >> self.n << self.n)}")
            return s
        local = 0
        for lab in members(s):
            i = self._index.get(lab)
            if i is None:
                raise ValueError(f"unknown label {lab}")
            local |= 1 << i
        return local

    def to_labels(self, local: int) -> int:
        """Translate a local-index mask to a label mask."""
        if self.labels == tuple(range(self.n)):
            return local
        return vertex_set(self.labels[i] for i in members(local))

    def adjacency_matrix(self):
        import numpy as np

        a = np.zeros((self.n, self.n))
        for i, j in self.edges():
            a[i, j] = a[j, i] = 1.0
        return a


def from_edges(n: int, edges: Iterable[Sequence[int]], labels=None, coords=None) -> Graph:
    """Build a graph from local-index edge pairs."""
    adj = [0] * n
    for i, j in edges:
        i, j = int(i), int(j)
        if i == j:
            raise ValueError(f"self-loop at {i}")
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge ({i}, {j}) out of range")
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    return Graph(adj, labels, coords)


def complete_graph(n: int) -> Graph:
    return from_edges(n, combinations(range(n), 2))


def cycle_graph(n: int) -> Graph:
    return from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return from_edges(n, [(i, i + 1) for i in range(n - 1)])


def edgeless_graph(n: int) -> Graph:
    return Graph([0] * n)


def unit_disk_graph(points: Sequence[Sequence[float]], radius: float) -> Graph:
    """Unit-disk graph: an edge joins two points strictly closer than ``radius``."""
    if not radius > 0:
        raise ValueError("radius must be positive")
    pts = [(float(x), float(y)) for x, y in points]
    n = len(pts)
    adj = [0] * n
    for i, j in combinations(range(n), 2):
        d = math.dist(pts[i], pts[j])
        if d == 0.0:
            raise ValueError(f"points {i} and {j} coincide")
        if d < radius:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    return Graph(adj, coords=pts)


def is_udg_consistent(g: Graph, radius: float) -> bool:
    """True iff ``g`` has coordinates and its edges are exactly the pairs closer than ``radius``."""
    if g.coords is None:
        return False
    for i, j in combinations(range(g.n), 2):
        if (math.dist(g.coords[i], g.coords[j]) < radius) != bool(g.adj[i] >> j & 1):
            return False
    return True


def is_independent(g: Graph, s: int) -> bool:
    local = g.to_local(s)
    for i in members(local):
        if g.adj[i] & local:
            return False
    return True


def is_maximal_independent(g: Graph, s: int) -> bool:
    """Independent and no outside vertex can be added."""
    local = g.to_local(s)
    covered = local
    for i in members(local):
        if g.adj[i] & local:
            return False
        covered |= g.adj[i]
    return covered == (1 << g.n) - 1


def induced_remove(g: Graph, s: int) -> Graph:
    """Subgraph induced by the vertices of ``g`` not in ``s``; labels and coords kept."""
    local = g.to_local(s)
    if not local:
        return g
    keep = [i for i in range(g.n) if not local >> i & 1]
    pos = {old: new for new, old in enumerate(keep)}
    adj = []
    for i in keep:
        row = 0
        for j in members(g.adj[i] & ~local):
            row |= 1 << pos[j]
        adj.append(row)
    coords = None if g.coords is None else [g.coords[i] for i in keep]
    return Graph(adj, [g.labels[i] for i in keep], coords)


def fingerprint(g: Graph) -> int:
    """Bitmask of the root labels present in ``g``; injective over vertex sets."""
    return g.vertices


def degrees(g: Graph) -> tuple[list[int], int]:
    """Per-vertex degrees and the maximum degree (0 for an empty graph)."""
    deg = [row.bit_count() for row in g.adj]
    return deg, max(deg, default=0)


def graph_to_dict(g: Graph) -> dict:
    out = {"n": g.n, "edges": [list(e) for e in g.edges()]}
    if g.coords is not None:
        out["coords"] = [list(c) for c in g.coords]
    out["labels"] = list(g.labels)
    return out


def graph_from_dict(d: dict) -> Graph:
    return from_edges(int(d["n"]), d.get("edges", []), d.get("labels"), d.get("coords"))


def save_graph(g: Graph, path) -> None:
    with open(path, "w") as fh:
        json.dump(graph_to_dict(g), fh)
        fh.write("\n")


def load_graph(path) -> Graph:
    with open(path) as fh:
        return graph_from_dict(json.load(fh))
