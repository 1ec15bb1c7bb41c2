"""Benchmark generation, figure of merit, and capacity search.

Benchmarks are Barabasi-Albert preferential-attachment graphs (seeded
with an m-clique) with standard-normal edge weights; linear terms are
either all zero or standard normal, selected per instance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from chainskip.embed import EmbedderParams, find_embedding, metrics
from chainskip.hwgraph import HardwareGraph
from chainskip.ising import IsingModel


@dataclass(frozen=True)
class BAParams:
    n: int
    m: int
    seed: int = 0
    linear_mode: str = "zero"

    def __post_init__(self):
        if not 1 <= self.m < self.n:
            raise ValueError(f"need 1 <= m < n, got m={self.m}, n={self.n}")
        if self.linear_mode not in ("zero", "normal"):
            raise ValueError(f"unknown linear mode {self.linear_mode!r}")


def ba_graph(params: BAParams) -> dict[int, set[int]]:
    """Preferential-attachment graph: an m-clique seed, then each new
    node attaches to m distinct existing nodes with probability
    proportional to degree."""
    rng = np.random.default_rng(np.random.SeedSequence([params.seed, 0]))
    n, m = params.n, params.m
    adj: dict[int, set[int]] = {v: set() for v in range(n)}
    repeated: list[int] = []
    for i in range(m):
        for j in range(i + 1, m):
            adj[i].add(j)
            adj[j].add(i)
            repeated.extend((i, j))
    for new in range(m, n):
        targets: set[int] = set()
        while len(targets) < m:
            if repeated:
                pick = repeated[int(rng.integers(len(repeated)))]
            else:
                # Degenerate start (m=1 seed has degree 0): uniform choice.
                pick = int(rng.integers(new))
            targets.add(pick)
        for t in targets:
            adj[new].add(t)
            adj[t].add(new)
            repeated.extend((new, t))
    return adj


def to_ising(graph: dict[int, set[int]], params: BAParams) -> IsingModel:
    """Weight the graph into an Ising model; J ~ N(0,1) per edge, h all
    zero or N(0,1) per node depending on linear_mode. The weight stream
    is seeded independently of the graph stream."""
    rng = np.random.default_rng(np.random.SeedSequence([params.seed, 1]))
    edges = sorted(
        (i, j) for i, neigh in graph.items() for j in neigh if i < j
    )
    J = {edge: float(w) for edge, w in zip(edges, rng.standard_normal(len(edges)))}
    if params.linear_mode == "normal":
        nodes = sorted(graph)
        h = {v: float(w) for v, w in zip(nodes, rng.standard_normal(len(nodes)))}
    else:
        h = {}
    return IsingModel(h=h, J=J, offset=0.0, variables=frozenset(graph))


def ba_model(params: BAParams) -> IsingModel:
    return to_ising(ba_graph(params), params)


def energy_residual(e_min: float, e_global: float) -> float:
    """Gap between the best obtained energy and the true optimum."""
    return abs(e_min - e_global)


def _degree_pruned(graph: dict[int, set[int]], c: int) -> dict[int, set[int]]:
    """Drop the c highest-degree nodes (ties by ascending id)."""
    order = sorted(graph, key=lambda v: (-len(graph[v]), v))
    drop = set(order[:c])
    return {
        v: {u for u in neigh if u not in drop}
        for v, neigh in graph.items()
        if v not in drop
    }


def capacity_search(
    family,
    hw: HardwareGraph,
    c: int = 0,
    embedder_params: EmbedderParams | None = None,
    n_start: int = 2,
):
    """Largest n for which the family's graph, after pruning its top-c
    degree nodes, still embeds into hw. Doubling then bisection; each
    probe gets the embedder's full attempt budget.

    family: callable n -> adjacency dict.
    Returns (capacity, witness_metrics); (0, None) if nothing embeds.
    """
    params = embedder_params or EmbedderParams()

    def probe(n):
        graph = family(n)
        if c > 0:
            graph = _degree_pruned(graph, min(c, len(graph)))
            if not graph:
                return "empty"  # everything pruned away: trivially fits
        if len(graph) > hw.num_nodes:
            return None
        return find_embedding(graph, hw, params)

    def as_metrics(result):
        return metrics(result, hw) if result not in (None, "empty") else None

    n = max(n_start, 1)
    best_n = 0
    best_result = None
    result = probe(n)
    if result is None:
        # Walk down instead: the starting point may already be too big.
        while n > 1:
            n -= 1
            result = probe(n)
            if result is not None:
                return n, as_metrics(result)
        return 0, None
    while result is not None:
        best_n, best_result = n, result
        if n - c >= hw.num_nodes:
            break
        n *= 2
        result = probe(n)
    lo, hi = best_n, n  # embeds at lo, fails at hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        result = probe(mid)
        if result is not None:
            lo, best_n, best_result = mid, mid, result
        else:
            hi = mid
    return best_n, as_metrics(best_result)
