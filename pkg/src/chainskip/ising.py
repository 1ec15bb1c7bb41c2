"""Sparse Ising model core: energy, variable fixing, exact ground states.

A model is ``offset + sum_i h_i z_i + sum_{i<j} J_ij z_i z_j`` over spins
z in {-1, +1}. Coefficients are stored sparsely; a missing key means 0.
Models are treated as immutable values: every operation returns a new
model and never mutates its input.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from chainskip.errors import (
    MissingVariableError,
    ModelTooLargeError,
    UnknownQubitError,
)

BRUTE_FORCE_LIMIT = 24

_ENUM_CHUNK = 1 << 16


def _canonical_edge(i, j):
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class IsingModel:
    h: dict[int, float]
    J: dict[tuple[int, int], float]
    offset: float = 0.0
    variables: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        canonical = {}
        for (i, j), coef in self.J.items():
            if i == j:
                raise ValueError(f"self-coupling ({i},{i}) is not allowed")
            if not math.isfinite(coef):
                raise ValueError(f"non-finite coupling on ({i},{j})")
            key = _canonical_edge(i, j)
            if key in canonical:
                raise ValueError(f"duplicate coupling for edge {key}")
            canonical[key] = coef
        for i, coef in self.h.items():
            if not math.isfinite(coef):
                raise ValueError(f"non-finite linear term on {i}")
        variables = set(self.variables)
        variables.update(self.h)
        for i, j in canonical:
            variables.add(i)
            variables.add(j)
        object.__setattr__(self, "h", dict(self.h))
        object.__setattr__(self, "J", canonical)
        object.__setattr__(self, "variables", frozenset(variables))

    @property
    def num_variables(self) -> int:
        return len(self.variables)

    def sorted_variables(self) -> list[int]:
        return sorted(self.variables)

    def adjacency(self) -> dict[int, set[int]]:
        """Coupling graph of the model (isolated variables included)."""
        adj = {v: set() for v in self.variables}
        for i, j in self.J:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def degree(self, q: int) -> int:
        if q not in self.variables:
            raise UnknownQubitError(f"qubit {q} is not a model variable")
        return sum(1 for edge in self.J if q in edge)

    def energy(self, assignment: dict[int, int]) -> float:
        """Evaluate the model at a full spin assignment."""
        missing = self.variables - assignment.keys()
        if missing:
            raise MissingVariableError(
                f"assignment lacks variables {sorted(missing)}"
            )
        total = self.offset
        for i in sorted(self.h):
            total += self.h[i] * assignment[i]
        for i, j in sorted(self.J):
            total += self.J[(i, j)] * assignment[i] * assignment[j]
        return total

    def fix_qubit(self, q: int, spin: int) -> "IsingModel":
        """Substitute z_q = spin, folding its terms into h and offset."""
        if q not in self.variables:
            raise UnknownQubitError(f"qubit {q} is not a model variable")
        if spin not in (-1, 1):
            raise ValueError(f"spin must be -1 or +1, got {spin}")
        h = dict(self.h)
        offset = self.offset + h.pop(q, 0.0) * spin
        J = {}
        for (i, j), coef in self.J.items():
            if q == i or q == j:
                other = j if q == i else i
                h[other] = h.get(other, 0.0) + coef * spin
            else:
                J[(i, j)] = coef
        variables = self.variables - {q}
        return IsingModel(h=h, J=J, offset=offset, variables=variables)

    def fix_qubits(self, fixing: dict[int, int]) -> "IsingModel":
        """Fix several qubits; applied in ascending id order so the
        result is independent of the mapping's iteration order."""
        unknown = fixing.keys() - self.variables
        if unknown:
            raise UnknownQubitError(f"unknown qubits {sorted(unknown)}")
        model = self
        for q in sorted(fixing):
            model = model.fix_qubit(q, fixing[q])
        return model

    def has_zero_linear(self) -> bool:
        """True iff every linear coefficient is exactly 0.0."""
        return all(coef == 0.0 for coef in self.h.values())

    def degree_order(self) -> list[int]:
        """Variables by descending coupling-graph degree, ties by id."""
        degrees = {v: 0 for v in self.variables}
        for i, j in self.J:
            degrees[i] += 1
            degrees[j] += 1
        return sorted(self.variables, key=lambda v: (-degrees[v], v))

    def _arrays(self, order: list[int]):
        index = {v: k for k, v in enumerate(order)}
        h = np.array([self.h.get(v, 0.0) for v in order], dtype=np.float64)
        edges = sorted(self.J)
        ei = np.array([index[i] for i, j in edges], dtype=np.int64)
        ej = np.array([index[j] for i, j in edges], dtype=np.int64)
        w = np.array([self.J[e] for e in edges], dtype=np.float64)
        return h, ei, ej, w

    def brute_force_ground(
        self, limit: int = BRUTE_FORCE_LIMIT
    ) -> tuple[dict[int, int], float]:
        """Exact global minimum by exhaustive enumeration.

        Returns the lexicographically smallest optimal assignment
        (variables in ascending id order, -1 before +1) and its energy.
        """
        order = self.sorted_variables()
        n = len(order)
        if n > limit:
            raise ModelTooLargeError(
                f"{n} variables exceeds enumeration limit {limit}"
            )
        if n == 0:
            return {}, self.offset
        h, ei, ej, w = self._arrays(order)
        # Index bit n-1-k holds variable order[k]; bit 0 -> spin -1. Index
        # order then equals lexicographic order over assignments, so the
        # first minimum found is the canonical witness.
        shifts = np.arange(n - 1, -1, -1, dtype=np.uint32)
        best_energy = math.inf
        best_index = -1
        total = 1 << n
        for start in range(0, total, _ENUM_CHUNK):
            idx = np.arange(start, min(start + _ENUM_CHUNK, total), dtype=np.uint32)
            spins = (
                2.0 * ((idx[:, None] >> shifts[None, :]) & 1).astype(np.float64)
                - 1.0
            )
            energies = spins @ h
            if len(w):
                energies += (spins[:, ei] * spins[:, ej]) @ w
            k = int(np.argmin(energies))
            if energies[k] < best_energy:
                best_energy = float(energies[k])
                best_index = start + k
        assignment = {
            v: (1 if (best_index >> (n - 1 - k)) & 1 else -1)
            for k, v in enumerate(order)
        }
        # Recompute through energy() so callers comparing against scalar
        # evaluations of the same assignment get a bitwise match.
        return assignment, self.energy(assignment)

    def to_dict(self) -> dict:
        return {
            "variables": self.sorted_variables(),
            "h": {str(i): coef for i, coef in sorted(self.h.items())},
            "J": [[i, j, coef] for (i, j), coef in sorted(self.J.items())],
            "offset": self.offset,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "IsingModel":
        return cls(
            h={int(i): float(c) for i, c in data.get("h", {}).items()},
            J={(int(i), int(j)): float(c) for i, j, c in data.get("J", [])},
            offset=float(data.get("offset", 0.0)),
            variables=frozenset(int(v) for v in data.get("variables", [])),
        )

    @classmethod
    def from_json(cls, text: str) -> "IsingModel":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Sample:
    assignment: dict[int, int]
    energy: float
    occurrences: int = 1

    def spins_tuple(self) -> tuple[int, ...]:
        return tuple(self.assignment[v] for v in sorted(self.assignment))


@dataclass(frozen=True)
class SampleSet:
    samples: tuple[Sample, ...]
    num_reads: int

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))
        total = sum(s.occurrences for s in self.samples)
        if total != self.num_reads:
            raise ValueError(
                f"occurrences sum to {total}, expected {self.num_reads}"
            )

    def best(self) -> Sample:
        return min(self.samples, key=lambda s: (s.energy, s.spins_tuple()))

    def min_energy(self) -> float:
        return min(s.energy for s in self.samples)

    def mean_energy(self) -> float:
        """Occurrence-weighted mean energy."""
        return (
            sum(s.energy * s.occurrences for s in self.samples) / self.num_reads
        )

    def to_jsonl(self) -> str:
        lines = []
        for s in self.samples:
            order = sorted(s.assignment)
            lines.append(
                json.dumps(
                    {
                        "variables": order,
                        "spins": [s.assignment[v] for v in order],
                        "energy": s.energy,
                        "occ": s.occurrences,
                    }
                )
            )
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "SampleSet":
        samples = []
        for line in text.splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            assignment = dict(zip(rec["variables"], rec["spins"]))
            samples.append(
                Sample(
                    assignment=assignment,
                    energy=float(rec["energy"]),
                    occurrences=int(rec["occ"]),
                )
            )
        return cls(samples=tuple(samples), num_reads=sum(s.occurrences for s in samples))
