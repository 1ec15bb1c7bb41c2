"""Convert hardware-level samples back to program qubits.

Each chain is resolved by majority vote; tied even-length chains
("balanced") are repaired either by exhaustive completion search (up to
2^10 = 1024 candidates) or, past that threshold, by seeded random
assignment. Optionally a greedy single-spin-flip descent (sqc) can
polish any assignment afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from chainskip.embed import Embedding
from chainskip.errors import MissingVariableError
from chainskip.ising import IsingModel, Sample, SampleSet

DEFAULT_BALANCED_LIMIT = 10


@dataclass(frozen=True)
class UnembedStats:
    broken_chain_count: int
    balanced_chain_count: int
    repaired_by_bruteforce: bool
    repaired_randomly: bool

    def to_dict(self) -> dict:
        return {
            "broken_chain_count": self.broken_chain_count,
            "balanced_chain_count": self.balanced_chain_count,
            "repaired_by_bruteforce": self.repaired_by_bruteforce,
            "repaired_randomly": self.repaired_randomly,
        }


def majority_vote(spins) -> int:
    """Sign of the spin sum; 0 marks a balanced (tied) chain."""
    total = sum(spins)
    if total > 0:
        return 1
    if total < 0:
        return -1
    return 0


def unembed_sample(
    hw_assignment: dict[int, int],
    embedding: Embedding,
    logical: IsingModel,
    b_max: int = DEFAULT_BALANCED_LIMIT,
    seed: int = 0,
    occurrences: int = 1,
) -> tuple[Sample, UnembedStats]:
    """Resolve every chain of a hardware read into a logical sample."""
    assignment: dict[int, int] = {}
    balanced: list[int] = []
    broken = 0
    for q, chain in sorted(embedding.chains.items()):
        try:
            spins = [hw_assignment[x] for x in sorted(chain)]
        except KeyError as exc:
            raise MissingVariableError(
                f"hardware sample lacks qubit {exc.args[0]} of chain {q}"
            ) from exc
        vote = majority_vote(spins)
        if len(set(spins)) > 1:
            broken += 1
        if vote == 0:
            balanced.append(q)
        else:
            assignment[q] = vote

    repaired_bruteforce = False
    repaired_randomly = False
    if balanced:
        if len(balanced) <= b_max:
            repaired_bruteforce = True
            assignment = _best_completion(logical, assignment, balanced)
        else:
            repaired_randomly = True
            rng = np.random.default_rng(np.random.SeedSequence([seed]))
            for q in balanced:
                assignment[q] = int(rng.integers(0, 2)) * 2 - 1

    sample = Sample(
        assignment=assignment,
        energy=logical.energy(assignment),
        occurrences=occurrences,
    )
    stats = UnembedStats(
        broken_chain_count=broken,
        balanced_chain_count=len(balanced),
        repaired_by_bruteforce=repaired_bruteforce,
        repaired_randomly=repaired_randomly,
    )
    return sample, stats


def _best_completion(model, partial, open_qubits):
    """Exhaustively complete the tied qubits; lowest energy wins, ties
    by lexicographically smallest assignment (enumeration order)."""
    order = sorted(open_qubits)
    b = len(order)
    best = None
    best_energy = None
    for index in range(1 << b):
        candidate = dict(partial)
        for k, q in enumerate(order):
            candidate[q] = 1 if (index >> (b - 1 - k)) & 1 else -1
        energy = model.energy(candidate)
        if best_energy is None or energy < best_energy:
            best_energy = energy
            best = candidate
    return best


def unembed_sampleset(
    hw_samples: SampleSet,
    embedding: Embedding,
    logical: IsingModel,
    b_max: int = DEFAULT_BALANCED_LIMIT,
    seed: int = 0,
) -> tuple[SampleSet, list[UnembedStats]]:
    """Unembed every distinct hardware read, re-aggregating duplicates."""
    grouped: dict[tuple, Sample] = {}
    stats = []
    for hw_sample in hw_samples.samples:
        sample, st = unembed_sample(
            hw_sample.assignment,
            embedding,
            logical,
            b_max=b_max,
            seed=seed,
            occurrences=hw_sample.occurrences,
        )
        stats.append(st)
        key = sample.spins_tuple()
        if key in grouped:
            prev = grouped[key]
            grouped[key] = Sample(
                assignment=prev.assignment,
                energy=prev.energy,
                occurrences=prev.occurrences + sample.occurrences,
            )
        else:
            grouped[key] = sample
    samples = sorted(grouped.values(), key=lambda s: (s.energy, s.spins_tuple()))
    return SampleSet(samples=tuple(samples), num_reads=hw_samples.num_reads), stats


def sqc(model: IsingModel, assignment: dict[int, int]) -> dict[int, int]:
    """Greedy single-spin-flip descent to a local minimum.

    Repeatedly flips the spin with the largest strict energy decrease
    (ties by lowest qubit id); terminates because energy decreases at
    every step.
    """
    missing = model.variables - assignment.keys()
    if missing:
        raise MissingVariableError(f"assignment lacks variables {sorted(missing)}")
    current = dict(assignment)
    order = model.sorted_variables()
    adj = {v: [] for v in order}
    for (i, j), coef in model.J.items():
        adj[i].append((j, coef))
        adj[j].append((i, coef))
    while True:
        best_q = None
        best_delta = 0.0
        for q in order:
            field = model.h.get(q, 0.0)
            for other, coef in adj[q]:
                field += coef * current[other]
            delta = -2.0 * current[q] * field
            if delta < best_delta:
                best_delta = delta
                best_q = q
        if best_q is None:
            return current
        current[best_q] = -current[best_q]
