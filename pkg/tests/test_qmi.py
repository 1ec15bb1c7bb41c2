"""Logical-to-physical model mapping and chain strength."""

import numpy as np
import pytest

from chainskip.embed import Embedding
from chainskip.errors import InvalidEmbeddingError
from chainskip.hwgraph import chimera, complete, grid
from chainskip.ising import IsingModel
from chainskip.qmi import (
    ChainStrengthPolicy,
    chain_uniform_assignment,
    embed_model,
)


def test_policy_fixed_and_scaled():
    model = IsingModel(h={0: 0.5}, J={(0, 1): -3.0})
    assert ChainStrengthPolicy("fixed", 1.5).strength(model) == 1.5
    assert ChainStrengthPolicy("scaled", 2.0).strength(model) == 6.0
    empty = IsingModel(h={}, J={}, variables=frozenset({0}))
    assert ChainStrengthPolicy("scaled", 2.0).strength(empty) == 2.0
    with pytest.raises(ValueError):
        ChainStrengthPolicy("bogus", 1.0)
    with pytest.raises(ValueError):
        ChainStrengthPolicy("fixed", 0.0)


def test_identity_embedding_is_identity_map():
    hw = complete(3)
    model = IsingModel(h={0: 0.3, 1: -0.2}, J={(0, 1): 1.0, (1, 2): -0.5}, offset=0.7)
    emb = Embedding(chains={v: frozenset({v}) for v in range(3)})
    phys = embed_model(model, emb, hw)
    assert phys.h == pytest.approx(model.h)
    assert phys.J == pytest.approx(model.J)
    assert phys.offset == model.offset


def test_linear_split_over_chain():
    hw = grid(1, 3)
    model = IsingModel(h={0: 0.9, 1: -0.4}, J={(0, 1): 1.0})
    emb = Embedding(chains={0: frozenset({0, 1}), 1: frozenset({2})})
    phys = embed_model(model, emb, hw, ChainStrengthPolicy("fixed", 5.0))
    assert phys.h[0] == pytest.approx(0.45)
    assert phys.h[1] == pytest.approx(0.45)
    assert phys.h[2] == pytest.approx(-0.4)
    # coupler (1,2) carries the logical edge, (0,1) the chain penalty
    assert phys.J[(1, 2)] == pytest.approx(1.0)
    assert phys.J[(0, 1)] == pytest.approx(-5.0)
    assert phys.offset == pytest.approx(model.offset + 5.0)


def test_chain_intact_energies_match_logical():
    rng = np.random.default_rng(3)
    hw = chimera(2, 2, 2)
    for _ in range(20):
        n = 4
        model = IsingModel(
            h={v: float(rng.standard_normal()) for v in range(n)},
            J={
                (i, j): float(rng.standard_normal())
                for i in range(n)
                for j in range(i + 1, n)
                if rng.random() < 0.8
            },
            variables=frozenset(range(n)),
        )
        from chainskip.embed import find_embedding

        emb = find_embedding(model, hw)
        assert emb is not None
        phys = embed_model(model, emb, hw)
        logical = {v: int(rng.integers(0, 2)) * 2 - 1 for v in range(n)}
        hw_assignment = chain_uniform_assignment(logical, emb)
        assert phys.energy(hw_assignment) == pytest.approx(
            model.energy(logical), abs=1e-9
        )


def test_invalid_embedding_rejected():
    hw = grid(1, 4)
    model = IsingModel(h={}, J={(0, 1): 1.0})
    emb = Embedding(chains={0: frozenset({0}), 1: frozenset({3})})
    with pytest.raises(InvalidEmbeddingError):
        embed_model(model, emb, hw)
