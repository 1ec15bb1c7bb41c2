"""Exhaustive chain-cut pipeline (breadth-first over the fixing tree).

The c highest-degree program qubits are fixed simultaneously, producing
2^c sub-problems (2^{c-1} when every linear term is zero, since the
model is then spin-flip symmetric). All sub-problems share one
embedding; each is executed, unembedded, and decoded back onto the
original variables, and the lowest decoded energy wins.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from chainskip._util import parallel_map
from chainskip.embed import (
    EmbedderParams,
    Embedding,
    EmbeddingMetrics,
    find_embedding,
    metrics as embedding_metrics,
)
from chainskip.errors import EmbeddingFailure
from chainskip.hwgraph import HardwareGraph
from chainskip.ising import IsingModel, Sample
from chainskip.qmi import ChainStrengthPolicy, embed_model
from chainskip.sampler import Sampler
from chainskip.unembed import DEFAULT_BALANCED_LIMIT, unembed_sampleset

MAX_CUTS = 11


@dataclass(frozen=True)
class CutPlan:
    cut_qubits: tuple[int, ...]
    symmetry_halved: bool

    @property
    def num_cuts(self) -> int:
        return len(self.cut_qubits)


@dataclass(frozen=True)
class SubProblem:
    index: int
    fixing: dict[int, int]
    model: IsingModel


@dataclass(frozen=True)
class SubProblemRecord:
    index: int
    fixing: dict[int, int]
    best_energy: float
    num_distinct_samples: int
    broken_chains: int = 0
    balanced_chains: int = 0

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "fixing": {str(q): s for q, s in sorted(self.fixing.items())},
            "best_energy": self.best_energy,
            "num_distinct_samples": self.num_distinct_samples,
            "broken_chains": self.broken_chains,
            "balanced_chains": self.balanced_chains,
        }


@dataclass(frozen=True)
class SkipperResult:
    best: Sample
    records: tuple[SubProblemRecord, ...]
    n_qmi: int
    plan: CutPlan
    embedding: Embedding | None = None
    embedding_metrics: EmbeddingMetrics | None = None

    def to_dict(self) -> dict:
        order = sorted(self.best.assignment)
        return {
            "best": {
                "variables": order,
                "spins": [self.best.assignment[v] for v in order],
                "energy": self.best.energy,
            },
            "n_qmi": self.n_qmi,
            "cut_qubits": list(self.plan.cut_qubits),
            "symmetry_halved": self.plan.symmetry_halved,
            "subproblems": [r.to_dict() for r in self.records],
            "embedding_metrics": (
                self.embedding_metrics.to_dict()
                if self.embedding_metrics
                else None
            ),
        }


def select_cuts(model: IsingModel, c: int, halve: bool = True) -> CutPlan:
    """Top-c qubits by coupling-graph degree, in degree order."""
    if c < 0 or c > min(MAX_CUTS, model.num_variables):
        raise ValueError(
            f"cut count {c} out of range 0..{min(MAX_CUTS, model.num_variables)}"
        )
    return CutPlan(
        cut_qubits=tuple(model.degree_order()[:c]),
        symmetry_halved=halve and c > 0 and model.has_zero_linear(),
    )


def build_subproblems(model: IsingModel, plan: CutPlan) -> list[SubProblem]:
    """Enumerate fixings in binary order: bit k of the index is the spin
    of cut qubit k (0 -> -1, 1 -> +1). Under symmetry halving only the
    fixings with the first cut qubit at +1 are kept; each stands in for
    its spin-flipped twin."""
    c = plan.num_cuts
    if c == 0:
        return [SubProblem(index=0, fixing={}, model=model)]
    subproblems = []
    for index in range(1 << c):
        if plan.symmetry_halved and not index & 1:
            continue
        fixing = {
            q: (1 if (index >> k) & 1 else -1)
            for k, q in enumerate(plan.cut_qubits)
        }
        subproblems.append(
            SubProblem(index=index, fixing=fixing, model=model.fix_qubits(fixing))
        )
    return subproblems


def decode(sample: Sample, fixing: dict[int, int], original: IsingModel) -> Sample:
    """Reinsert the fixed spins and recompute energy on the original."""
    overlap = sample.assignment.keys() & fixing.keys()
    if overlap:
        raise ValueError(f"sample and fixing overlap on {sorted(overlap)}")
    assignment = dict(sample.assignment)
    assignment.update(fixing)
    return Sample(
        assignment=assignment,
        energy=original.energy(assignment),
        occurrences=sample.occurrences,
    )


def _flip(assignment: dict[int, int]) -> dict[int, int]:
    return {q: -s for q, s in assignment.items()}


def run(
    model: IsingModel,
    c: int,
    sampler: Sampler,
    hw: HardwareGraph | None = None,
    embedder_params: EmbedderParams | None = None,
    chain_strength: ChainStrengthPolicy | None = None,
    b_max: int = DEFAULT_BALANCED_LIMIT,
    seed: int = 0,
    halve: bool = True,
) -> SkipperResult:
    """Execute the full cut tree and aggregate the best decoded sample.

    With hw=None sub-problems are sampled at the logical level (no
    embedding round-trip); otherwise one shared embedding of the reduced
    coupling graph is computed and every sub-problem is mapped through
    it, executed, and unembedded. halve=False disables symmetry halving
    even for zero-linear models.
    """
    plan = select_cuts(model, c, halve=halve)
    subproblems = build_subproblems(model, plan)
    reduced = subproblems[0].model

    embedding = None
    emb_metrics = None
    if hw is not None and reduced.num_variables > 0:
        start = time.monotonic()
        embedding = find_embedding(reduced, hw, embedder_params)
        if embedding is None:
            raise EmbeddingFailure(
                f"could not embed the reduced graph "
                f"({reduced.num_variables} nodes) into {hw.topology} hardware"
            )
        emb_metrics = embedding_metrics(embedding, hw, time.monotonic() - start)

    def execute(sub: SubProblem):
        if embedding is None or sub.model.num_variables == 0:
            sampleset = sampler(sub.model)
            broken = balanced = 0
        else:
            physical = embed_model(sub.model, embedding, hw, chain_strength)
            hw_sampleset = sampler(physical)
            sampleset, stats = unembed_sampleset(
                hw_sampleset,
                embedding,
                sub.model,
                b_max=b_max,
                seed=seed + sub.index,
            )
            broken = sum(s.broken_chain_count for s in stats)
            balanced = sum(s.balanced_chain_count for s in stats)
        best = sampleset.best()
        candidates = [decode(best, sub.fixing, model)]
        if plan.symmetry_halved:
            candidates.append(
                decode(
                    Sample(
                        assignment=_flip(best.assignment),
                        energy=best.energy,
                        occurrences=best.occurrences,
                    ),
                    _flip(sub.fixing),
                    model,
                )
            )
        decoded = min(candidates, key=lambda s: (s.energy, s.spins_tuple()))
        record = SubProblemRecord(
            index=sub.index,
            fixing=sub.fixing,
            best_energy=decoded.energy,
            num_distinct_samples=len(sampleset.samples),
            broken_chains=broken,
            balanced_chains=balanced,
        )
        return decoded, record

    outcomes = parallel_map(execute, subproblems)
    best = min(
        (decoded for decoded, _ in outcomes),
        key=lambda s: (s.energy, s.spins_tuple()),
    )
    return SkipperResult(
        best=best,
        records=tuple(record for _, record in outcomes),
        n_qmi=len(subproblems),
        plan=plan,
        embedding=embedding,
        embedding_metrics=emb_metrics,
    )
