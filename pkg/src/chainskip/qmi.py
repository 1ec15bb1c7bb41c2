"""Map a logical Ising model through an embedding into a hardware-level
executable model.

Linear terms are split evenly over chain members, quadratic terms over
the couplers joining two chains, and every intra-chain coupler gets a
ferromagnetic penalty -S with a matching +S offset so that any
chain-intact assignment has exactly its logical energy.
"""

from __future__ import annotations

from dataclasses import dataclass

from chainskip.embed import Embedding, validate
from chainskip.errors import InvalidEmbeddingError
from chainskip.hwgraph import HardwareGraph
from chainskip.ising import IsingModel

DEFAULT_CHAIN_STRENGTH_SCALE = 2.0


@dataclass(frozen=True)
class ChainStrengthPolicy:
    mode: str = "scaled"
    value: float = DEFAULT_CHAIN_STRENGTH_SCALE

    def __post_init__(self):
        if self.mode not in ("fixed", "scaled"):
            raise ValueError(f"unknown chain-strength mode {self.mode!r}")
        if self.value <= 0:
            raise ValueError("chain strength value must be positive")

    def strength(self, model: IsingModel) -> float:
        if self.mode == "fixed":
            return self.value
        peak = max(
            [abs(c) for c in model.h.values()]
            + [abs(c) for c in model.J.values()],
            default=1.0,
        )
        if peak == 0.0:
            peak = 1.0
        return self.value * peak


def embed_model(
    model: IsingModel,
    embedding: Embedding,
    hw: HardwareGraph,
    policy: ChainStrengthPolicy | None = None,
) -> IsingModel:
    """Produce the physical model for an embedded logical model."""
    policy = policy or ChainStrengthPolicy()
    violations = validate(embedding, model, hw)
    if violations:
        raise InvalidEmbeddingError("; ".join(violations))
    strength = policy.strength(model)

    h_phys: dict[int, float] = {}
    j_phys: dict[tuple[int, int], float] = {}
    offset = model.offset
    variables = set()

    for q in model.sorted_variables():
        chain = sorted(embedding.chain(q))
        variables.update(chain)
        coef = model.h.get(q, 0.0)
        if coef != 0.0:
            share = coef / len(chain)
            for x in chain:
                h_phys[x] = h_phys.get(x, 0.0) + share

    for (i, j), coef in sorted(model.J.items()):
        couplers = sorted(
            (x, y) if x < y else (y, x)
            for x in embedding.chain(i)
            for y in embedding.chain(j)
            if hw.has_edge(x, y)
        )
        if not couplers:
            raise InvalidEmbeddingError(
                f"no hardware coupler joins chains {i} and {j}"
            )
        share = coef / len(couplers)
        for edge in couplers:
            j_phys[edge] = j_phys.get(edge, 0.0) + share

    for q in model.sorted_variables():
        chain = embedding.chain(q)
        intra = sorted(
            (x, y)
            for x in chain
            for y in hw.adjacency[x]
            if y in chain and x < y
        )
        for edge in intra:
            j_phys[edge] = j_phys.get(edge, 0.0) - strength
            offset += strength

    return IsingModel(
        h=h_phys, J=j_phys, offset=offset, variables=frozenset(variables)
    )


def chain_uniform_assignment(
    logical: dict[int, int], embedding: Embedding
) -> dict[int, int]:
    """Expand a logical assignment to hardware qubits, chain-uniformly."""
    out = {}
    for q, spin in logical.items():
        for x in embedding.chain(q):
            out[x] = spin
    return out
