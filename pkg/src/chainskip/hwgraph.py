"""Hardware qubit-connectivity graphs targeted by the embedder."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

_MAX_NODES = 1 << 22


@dataclass(frozen=True)
class HardwareGraph:
    adjacency: dict[int, tuple[int, ...]]
    topology: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.adjacency:
            raise ValueError("hardware graph must have at least one node")
        clean = {}
        for node, neigh in self.adjacency.items():
            ns = sorted(set(neigh))
            if node in ns:
                raise ValueError(f"self-loop on node {node}")
            clean[node] = tuple(ns)
        for node, neigh in clean.items():
            for other in neigh:
                if node not in clean.get(other, ()):
                    raise ValueError(
                        f"asymmetric adjacency: {node}->{other} has no reverse"
                    )
        object.__setattr__(self, "adjacency", clean)

    @property
    def num_nodes(self) -> int:
        return len(self.adjacency)

    @property
    def num_edges(self) -> int:
        return sum(len(n) for n in self.adjacency.values()) // 2

    def nodes(self) -> list[int]:
        return sorted(self.adjacency)

    def neighbors(self, node: int) -> tuple[int, ...]:
        return self.adjacency[node]

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.adjacency.get(i, ())

    def edges(self) -> list[tuple[int, int]]:
        return sorted(
            (i, j) for i, neigh in self.adjacency.items() for j in neigh if i < j
        )

    def csr(self):
        """CSR arrays over a dense 0..N-1 relabeling, for the kernels.

        Returns (node_ids, indptr, indices) where node_ids[k] is the
        original label of dense index k.
        """
        node_ids = self.nodes()
        index = {v: k for k, v in enumerate(node_ids)}
        indptr = np.zeros(len(node_ids) + 1, dtype=np.int64)
        chunks = []
        for k, v in enumerate(node_ids):
            neigh = np.array([index[u] for u in self.adjacency[v]], dtype=np.int64)
            chunks.append(neigh)
            indptr[k + 1] = indptr[k] + len(neigh)
        indices = (
            np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
        )
        return node_ids, indptr, indices

    def to_dict(self) -> dict:
        if self.topology in ("chimera", "grid", "complete") and self.params:
            return {"topology": self.topology, **self.params}
        return {"topology": "custom", "edges": self.edges()}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "HardwareGraph":
        topology = data.get("topology", "custom")
        if topology == "chimera":
            return chimera(data["m"], data["n"], data["t"])
        if topology == "grid":
            return grid(data["rows"], data["cols"])
        if topology == "complete":
            return complete(data["n"])
        return from_edge_list(data["edges"])

    @classmethod
    def from_json(cls, text: str) -> "HardwareGraph":
        return cls.from_dict(json.loads(text))


def _build(edges, nodes, topology, params):
    adjacency = {v: set() for v in nodes}
    for i, j in edges:
        adjacency[i].add(j)
        adjacency[j].add(i)
    return HardwareGraph(
        adjacency={v: tuple(sorted(n)) for v, n in adjacency.items()},
        topology=topology,
        params=params,
    )


def chimera(m: int, n: int, t: int) -> HardwareGraph:
    """Chimera lattice C_{m,n,t}: an m x n grid of K_{t,t} unit cells.

    Node ids are row-major cell order, then shore, then in-shore index:
    id = 2*t*(row*n + col) + shore*t + k. Shore-0 qubits couple to the
    cell below, shore-1 qubits to the cell on the right.
    """
    if m < 1 or n < 1 or t < 1:
        raise ValueError("chimera dimensions must be >= 1")
    if 2 * m * n * t > _MAX_NODES:
        raise ValueError("chimera size overflow")

    def node(row, col, shore, k):
        return 2 * t * (row * n + col) + shore * t + k

    edges = []
    for row in range(m):
        for col in range(n):
            for a in range(t):
                for b in range(t):
                    edges.append((node(row, col, 0, a), node(row, col, 1, b)))
            if row + 1 < m:
                for k in range(t):
                    edges.append((node(row, col, 0, k), node(row + 1, col, 0, k)))
            if col + 1 < n:
                for k in range(t):
                    edges.append((node(row, col, 1, k), node(row, col + 1, 1, k)))
    nodes = range(2 * m * n * t)
    return _build(edges, nodes, "chimera", {"m": m, "n": n, "t": t})


def complete(n: int) -> HardwareGraph:
    if n < 1:
        raise ValueError("complete graph needs n >= 1")
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return _build(edges, range(n), "complete", {"n": n})


def grid(rows: int, cols: int) -> HardwareGraph:
    """Rectangular grid; node id = row*cols + col."""
    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be >= 1")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return _build(edges, range(rows * cols), "grid", {"rows": rows, "cols": cols})


def from_edge_list(edges) -> HardwareGraph:
    """Build a graph from (possibly one-directional) edge pairs."""
    nodes = set()
    pairs = []
    for i, j in edges:
        i, j = int(i), int(j)
        if i == j:
            raise ValueError(f"self-loop on node {i}")
        nodes.update((i, j))
        pairs.append((i, j))
    return _build(pairs, nodes, "custom", {})
