"""Greedy depth-first chain-cut pipeline.

Starting from the uncut model at tree index 1, each level fixes the
current model's highest-degree qubit to -1 (left child, index 2x) and
+1 (right child, index 2x+1), executes both children on one shared
embedding, and descends into the child whose sample-quality feature is
lower. The final answer is the best decoded energy over every node
evaluated, so it can never be worse than the uncut baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from chainskip._util import parallel_map
from chainskip.errors import EmbeddingFailure
from chainskip.embed import EmbedderParams, find_embedding
from chainskip.hwgraph import HardwareGraph
from chainskip.ising import IsingModel, Sample, SampleSet
from chainskip.qmi import ChainStrengthPolicy, embed_model
from chainskip.sampler import Sampler
from chainskip.skipper import MAX_CUTS, decode
from chainskip.unembed import DEFAULT_BALANCED_LIMIT, unembed_sampleset


def node_feature(sampleset: SampleSet) -> float:
    """Quality score |1 / (E_min * mean energy)|; lower is better.

    Degenerate spectra where the product is zero score +inf so they are
    never preferred over a scorable sibling.
    """
    if not sampleset.samples:
        raise ValueError("empty sample set has no feature")
    product = sampleset.min_energy() * sampleset.mean_energy()
    if product == 0.0:
        return math.inf
    return abs(1.0 / product)


@dataclass(frozen=True)
class NodeRecord:
    index: int
    level: int
    fixing: dict[int, int]
    feature: float
    best_energy: float

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "level": self.level,
            "fixing": {str(q): s for q, s in sorted(self.fixing.items())},
            "feature": self.feature if math.isfinite(self.feature) else "inf",
            "best_energy": self.best_energy,
        }


@dataclass(frozen=True)
class SkipperGResult:
    best: Sample
    nodes: tuple[NodeRecord, ...]
    path: tuple[int, ...]
    n_qmi: int
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        order = sorted(self.best.assignment)
        return {
            "best": {
                "variables": order,
                "spins": [self.best.assignment[v] for v in order],
                "energy": self.best.energy,
            },
            "n_qmi": self.n_qmi,
            "path": list(self.path),
            "nodes": [n.to_dict() for n in self.nodes],
            "warnings": list(self.warnings),
        }


def run(
    model: IsingModel,
    c: int,
    sampler: Sampler,
    hw: HardwareGraph | None = None,
    embedder_params: EmbedderParams | None = None,
    chain_strength: ChainStrengthPolicy | None = None,
    b_max: int = DEFAULT_BALANCED_LIMIT,
    seed: int = 0,
) -> SkipperGResult:
    """Descend c levels of the fixing tree, 2 executions per level plus
    the root, keeping the globally best decoded sample."""
    if c < 0 or c > min(MAX_CUTS, model.num_variables):
        raise ValueError(
            f"cut count {c} out of range 0..{min(MAX_CUTS, model.num_variables)}"
        )

    def evaluate(node_model: IsingModel, fixing: dict[int, int], embedding):
        if embedding is None or node_model.num_variables == 0:
            sampleset = sampler(node_model)
        else:
            physical = embed_model(node_model, embedding, hw, chain_strength)
            hw_sampleset = sampler(physical)
            sampleset, _ = unembed_sampleset(
                hw_sampleset, embedding, node_model, b_max=b_max, seed=seed
            )
        decoded = decode(sampleset.best(), fixing, model)
        return sampleset, decoded

    def embed_for(node_model: IsingModel):
        if hw is None or node_model.num_variables == 0:
            return None, None
        embedding = find_embedding(node_model, hw, embedder_params)
        if embedding is None:
            return None, "failed"
        return embedding, None

    nodes: list[NodeRecord] = []
    path: list[int] = [1]
    warnings: list[str] = []
    n_qmi = 0

    root_embedding, fail = embed_for(model)
    if fail:
        raise EmbeddingFailure("could not embed the root model")

    root_set, root_best = evaluate(model, {}, root_embedding)
    n_qmi += 1
    nodes.append(
        NodeRecord(
            index=1,
            level=0,
            fixing={},
            feature=node_feature(root_set),
            best_energy=root_best.energy,
        )
    )
    best = root_best

    current_model = model
    current_fixing: dict[int, int] = {}
    current_index = 1
    for level in range(1, c + 1):
        cut = current_model.degree_order()[0]
        child_fixings = []
        for spin, child_index in ((-1, 2 * current_index), (1, 2 * current_index + 1)):
            fixing = dict(current_fixing)
            fixing[cut] = spin
            child_fixings.append((child_index, fixing))

        left_model = current_model.fix_qubit(cut, -1)
        right_model = current_model.fix_qubit(cut, 1)
        # Both children have the same coupling graph; one fresh embedding
        # per level is shared between them.
        embedding, fail = embed_for(left_model)
        if fail:
            warnings.append(
                f"embedding failed at level {level}; stopping with best so far"
            )
            break

        child_models = (left_model, right_model)
        results = parallel_map(
            lambda pair: evaluate(pair[0], pair[1][1], embedding),
            list(zip(child_models, child_fixings)),
        )
        n_qmi += 2

        features = []
        for (child_index, fixing), (sampleset, decoded) in zip(
            child_fixings, results
        ):
            feature = node_feature(sampleset)
            features.append(feature)
            nodes.append(
                NodeRecord(
                    index=child_index,
                    level=level,
                    fixing=fixing,
                    feature=feature,
                    best_energy=decoded.energy,
                )
            )
            if (decoded.energy, decoded.spins_tuple()) < (
                best.energy,
                best.spins_tuple(),
            ):
                best = decoded

        # Lower feature wins; ties go to the left child.
        pick = 0 if features[0] <= features[1] else 1
        current_model = child_models[pick]
        current_index, current_fixing = child_fixings[pick]
        path.append(current_index)

    return SkipperGResult(
        best=best,
        nodes=tuple(nodes),
        path=tuple(path),
        n_qmi=n_qmi,
        warnings=tuple(warnings),
    )
