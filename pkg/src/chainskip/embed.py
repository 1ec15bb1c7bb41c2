"""Heuristic minor embedding of a coupling graph into a hardware graph.

The embedder does iterative chain placement: program qubits are placed
in random order by routing shortest paths over hardware vertices whose
weight grows exponentially with how many chains already use them, then
improvement sweeps re-route one program qubit at a time until vertex
overuse reaches zero and the total chain length stops shrinking.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from chainskip import _kernels
from chainskip.hwgraph import HardwareGraph
from chainskip.ising import IsingModel

# Routing constants (bounded on purpose; see EmbedderParams for the
# user-facing knobs).
OVERUSE_WEIGHT_BASE = 8.0
OVERUSE_EXP_CAP = 16


@dataclass(frozen=True)
class EmbedderParams:
    timeout: float = 10.0
    max_no_improvement: int = 10
    tries: int = 16
    seed: int = 0

    def __post_init__(self):
        if self.timeout <= 0 or self.max_no_improvement <= 0 or self.tries <= 0:
            raise ValueError("embedder parameters must be positive")


@dataclass(frozen=True)
class Embedding:
    chains: dict[int, frozenset[int]]

    def __post_init__(self):
        object.__setattr__(
            self,
            "chains",
            {q: frozenset(c) for q, c in self.chains.items()},
        )
        for q, chain in self.chains.items():
            if not chain:
                raise ValueError(f"empty chain for program qubit {q}")

    def chain(self, q: int) -> frozenset[int]:
        return self.chains[q]

    def used_qubits(self) -> set[int]:
        used = set()
        for chain in self.chains.values():
            used |= chain
        return used

    def to_dict(self) -> dict:
        return {
            "chains": {str(q): sorted(c) for q, c in sorted(self.chains.items())}
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Embedding":
        return cls(
            chains={
                int(q): frozenset(int(x) for x in c)
                for q, c in data["chains"].items()
            }
        )


@dataclass(frozen=True)
class EmbeddingMetrics:
    avg_chain_len: float
    max_chain_len: int
    chain_len_variance: float
    used_qubits: int
    unused_qubits: int
    embed_time: float

    def to_dict(self) -> dict:
        return {
            "avg_chain_len": self.avg_chain_len,
            "max_chain_len": self.max_chain_len,
            "chain_len_variance": self.chain_len_variance,
            "used_qubits": self.used_qubits,
            "unused_qubits": self.unused_qubits,
            "embed_time": self.embed_time,
        }


def as_adjacency(source) -> dict[int, set[int]]:
    """Normalize a coupling-graph input (IsingModel, HardwareGraph, or
    adjacency mapping) to a symmetric adjacency dict."""
    if isinstance(source, IsingModel):
        return source.adjacency()
    if isinstance(source, HardwareGraph):
        return {v: set(n) for v, n in source.adjacency.items()}
    adj = {int(v): {int(u) for u in neigh} for v, neigh in source.items()}
    for v, neigh in list(adj.items()):
        for u in neigh:
            adj.setdefault(u, set()).add(v)
    return adj


def validate(embedding: Embedding, source, hw: HardwareGraph) -> list[str]:
    """Check chain disjointness, chain connectivity, and the presence of
    a hardware edge for every logical edge. Returns violation messages
    (empty list means the embedding is valid)."""
    source_adj = as_adjacency(source)
    violations = []
    owner = {}
    for q, chain in sorted(embedding.chains.items()):
        for x in sorted(chain):
            if x not in hw.adjacency:
                violations.append(f"chain {q} uses unknown hardware qubit {x}")
            elif x in owner:
                violations.append(
                    f"hardware qubit {x} shared by chains {owner[x]} and {q}"
                )
            else:
                owner[x] = q
    for q in sorted(source_adj):
        if q not in embedding.chains:
            violations.append(f"program qubit {q} has no chain")
    for q, chain in sorted(embedding.chains.items()):
        nodes = {x for x in chain if x in hw.adjacency}
        if not nodes:
            continue
        seen = set()
        stack = [min(nodes)]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(u for u in hw.adjacency[x] if u in nodes)
        if seen != nodes:
            violations.append(f"chain {q} is not connected: {sorted(nodes - seen)}")
    for i in sorted(source_adj):
        for j in sorted(source_adj[i]):
            if i >= j or i not in embedding.chains or j not in embedding.chains:
                continue
            ci, cj = embedding.chains[i], embedding.chains[j]
            if not any(
                hw.has_edge(x, y) for x in ci for y in cj
            ):
                violations.append(f"no hardware coupler joins chains {i} and {j}")
    return violations


def metrics(
    embedding: Embedding, hw: HardwareGraph, embed_time: float = 0.0
) -> EmbeddingMetrics:
    lengths = np.array(
        [len(c) for _, c in sorted(embedding.chains.items())], dtype=np.float64
    )
    used = int(lengths.sum())
    return EmbeddingMetrics(
        avg_chain_len=float(lengths.mean()),
        max_chain_len=int(lengths.max()),
        chain_len_variance=float(lengths.var()),
        used_qubits=used,
        unused_qubits=hw.num_nodes - used,
        embed_time=embed_time,
    )


class _Router:
    """One embedding attempt over a dense hardware relabeling."""

    def __init__(self, source_adj, hw, rng, deadline):
        self.node_ids, self.indptr, self.indices = hw.csr()
        self.n_hw = len(self.node_ids)
        self.source_adj = source_adj
        self.rng = rng
        self.deadline = deadline
        self.usage = np.zeros(self.n_hw, dtype=np.int64)
        self.chains: dict[int, set[int]] = {}
        # Reusing a vertex must cost more than any simple path through
        # free hardware, or single-vertex chains parasite on contested
        # vertices and sweeps hit a fixed point.
        self.weight_base = max(OVERUSE_WEIGHT_BASE, float(self.n_hw))

    def _weights(self):
        exponent = np.minimum(self.usage, OVERUSE_EXP_CAP).astype(np.float64)
        base = self.weight_base**exponent
        # Chimera-like graphs have many equal-cost paths; sub-integer
        # noise breaks those ties differently on every placement without
        # perturbing the hop-count ordering of short paths.
        return base + self.rng.random(self.n_hw) / 1024.0

    def _route_to(self, weights, chain_u):
        mask = np.zeros(self.n_hw, dtype=np.bool_)
        mask[list(chain_u)] = True
        dist = np.empty(self.n_hw, dtype=np.float64)
        parent = np.empty(self.n_hw, dtype=np.int64)
        _kernels.dijkstra(self.indptr, self.indices, weights, mask, dist, parent)
        return dist, parent

    def place(self, v):
        old = self.chains.pop(v, None)
        if old:
            for x in old:
                self.usage[x] -= 1
        weights = self._weights()
        placed = [
            u for u in sorted(self.source_adj[v]) if self.chains.get(u)
        ]
        if not placed:
            root = int(np.argmin(weights))
            chain = {root}
        else:
            routes = [self._route_to(weights, self.chains[u]) for u in placed]
            # Root cost: occupy the root once, plus each route's path cost
            # with the root's own weight stripped (dist already includes it
            # for any root outside the source chain).
            cost = weights.copy()
            for dist, _ in routes:
                cost += np.where(dist > 0.0, dist - weights, 0.0)
            root = int(np.argmin(cost))
            if not np.isfinite(cost[root]):
                return False
            chain = {root}
            for dist, parent in routes:
                x = root
                while dist[x] > 0.0:
                    chain.add(x)
                    x = int(parent[x])
        self.chains[v] = chain
        for x in chain:
            self.usage[x] += 1
        return True

    def _hw_neighbors(self, x):
        return self.indices[self.indptr[x] : self.indptr[x + 1]]

    def _trimmed(self, chains):
        """Drop chain leaves that neither connectivity nor any logical
        edge needs. Operates on a copy; live routing state is untouched."""
        chains = {v: set(c) for v, c in chains.items()}
        changed = True
        while changed:
            changed = False
            for v in sorted(chains):
                chain = chains[v]
                for x in sorted(chain):
                    if len(chain) == 1:
                        break
                    inside = sum(1 for y in self._hw_neighbors(x) if y in chain)
                    if inside > 1:
                        continue  # not a leaf; removal could disconnect
                    rest = chain - {x}
                    needed = False
                    for u in sorted(self.source_adj[v]):
                        if u not in chains:
                            continue
                        other = chains[u]
                        if not any(
                            z in other for y in rest for z in self._hw_neighbors(y)
                        ):
                            needed = True
                            break
                    if not needed:
                        chain.discard(x)
                        changed = True
        return chains

    def _shake(self):
        """Tear out every chain touching an overused vertex at once, then
        re-place them. One-at-a-time re-placement cannot break a mutual
        block where each contested chain is the cheapest option while the
        others still hold the region."""
        contested = set(np.where(self.usage > 1)[0])
        owners = sorted(
            v for v, chain in self.chains.items() if chain & contested
        )
        if not owners:
            return True
        for v in owners:
            chain = self.chains.pop(v)
            for x in chain:
                self.usage[x] -= 1
        for v in self.rng.permutation(owners):
            if not self.place(int(v)):
                return False
        return True

    def objective(self):
        overuse = int(np.maximum(self.usage - 1, 0).sum())
        total = sum(len(c) for c in self.chains.values())
        return overuse, total

    def run(self, max_no_improvement):
        order = [int(v) for v in self.rng.permutation(sorted(self.source_adj))]
        for v in order:
            if not self.place(v):
                return None
        best_obj = self.objective()
        best_chains = self._trimmed(self.chains) if best_obj[0] == 0 else None
        no_improve = 0
        while no_improve < max_no_improvement and time.monotonic() < self.deadline:
            order = [int(v) for v in self.rng.permutation(order)]
            for v in order:
                if not self.place(v):
                    return None
            obj = self.objective()
            if obj < best_obj:
                best_obj = obj
                no_improve = 0
                if obj[0] == 0:
                    best_chains = self._trimmed(self.chains)
            else:
                no_improve += 1
                if obj[0] > 0 and not self._shake():
                    return None
        if best_chains is None:
            return None
        return {
            q: frozenset(self.node_ids[x] for x in chain)
            for q, chain in best_chains.items()
        }


def find_embedding(
    source, hw: HardwareGraph, params: EmbedderParams | None = None
) -> Embedding | None:
    """Embed a coupling graph into hardware; returns None on failure.

    Deterministic given (source, hw, params): attempt t uses the rng
    stream seeded by SeedSequence([params.seed, t]).
    """
    params = params or EmbedderParams()
    source_adj = as_adjacency(source)
    if not source_adj:
        raise ValueError("source graph is empty")
    if len(source_adj) > hw.num_nodes:
        return None
    deadline = time.monotonic() + params.timeout
    for attempt in range(params.tries):
        if time.monotonic() >= deadline:
            break
        rng = np.random.default_rng(
            np.random.SeedSequence([params.seed, attempt])
        )
        router = _Router(source_adj, hw, rng, deadline)
        chains = router.run(params.max_no_improvement)
        if chains is None:
            continue
        embedding = Embedding(chains=chains)
        if not validate(embedding, source_adj, hw):
            return embedding
    return None
