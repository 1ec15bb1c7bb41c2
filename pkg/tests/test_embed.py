"""Embedding heuristic: validity, determinism, validator behavior."""

import numpy as np
import pytest

from chainskip.bench import BAParams, ba_graph
from chainskip.embed import (
    EmbedderParams,
    Embedding,
    find_embedding,
    metrics,
    validate,
)
from chainskip.hwgraph import chimera, complete, grid


def test_identity_embedding_validates():
    hw = chimera(1, 1, 2)
    source = {v: set(hw.neighbors(v)) for v in hw.nodes()}
    emb = Embedding(chains={v: frozenset({v}) for v in hw.nodes()})
    assert validate(emb, source, hw) == []


def test_validator_catches_overlap():
    hw = complete(4)
    source = {0: {1}, 1: {0}}
    emb = Embedding(chains={0: frozenset({2}), 1: frozenset({2})})
    violations = validate(emb, source, hw)
    assert any("shared" in v for v in violations)


def test_validator_catches_disconnected_chain():
    hw = grid(1, 4)
    source = {0: {1}, 1: {0}}
    emb = Embedding(chains={0: frozenset({0, 2}), 1: frozenset({1})})
    violations = validate(emb, source, hw)
    assert any("not connected" in v for v in violations)


def test_validator_catches_missing_coupler():
    hw = grid(1, 4)
    source = {0: {1}, 1: {0}}
    emb = Embedding(chains={0: frozenset({0}), 1: frozenset({3})})
    violations = validate(emb, source, hw)
    assert any("coupler" in v for v in violations)


def test_validator_catches_missing_chain():
    hw = complete(3)
    source = {0: {1}, 1: {0}}
    emb = Embedding(chains={0: frozenset({0})})
    violations = validate(emb, source, hw)
    assert any("no chain" in v for v in violations)


def test_k4_into_k4():
    hw = complete(4)
    source = {i: {j for j in range(4) if j != i} for i in range(4)}
    emb = find_embedding(source, hw, EmbedderParams(seed=0))
    assert emb is not None
    assert validate(emb, source, hw) == []


def test_k5_into_chimera_cell():
    # K5 does not fit C_{1,1,4} with unit chains; chains of length 2 exist.
    hw = chimera(1, 1, 4)
    source = {i: {j for j in range(5) if j != i} for i in range(5)}
    emb = find_embedding(source, hw, EmbedderParams(seed=0))
    assert emb is not None
    assert validate(emb, source, hw) == []
    assert max(len(c) for c in emb.chains.values()) >= 2


def test_too_large_source_fails_fast():
    hw = complete(3)
    source = {i: {(i + 1) % 5} for i in range(5)}
    assert find_embedding(source, hw) is None


def test_determinism():
    hw = chimera(3, 3, 4)
    g = ba_graph(BAParams(n=15, m=2, seed=4))
    params = EmbedderParams(seed=9)
    a = find_embedding(g, hw, params)
    b = find_embedding(g, hw, params)
    assert a is not None
    assert a.chains == b.chains


def test_seed_changes_result_shape():
    hw = chimera(3, 3, 4)
    g = ba_graph(BAParams(n=15, m=2, seed=4))
    a = find_embedding(g, hw, EmbedderParams(seed=1))
    b = find_embedding(g, hw, EmbedderParams(seed=2))
    assert a is not None and b is not None
    assert validate(a, g, hw) == [] and validate(b, g, hw) == []


def test_ba_instances_embed_and_validate():
    hw = chimera(4, 4, 4)
    for m, n in [(1, 12), (2, 16), (3, 20)]:
        g = ba_graph(BAParams(n=n, m=m, seed=m))
        emb = find_embedding(g, hw, EmbedderParams(seed=0))
        assert emb is not None, f"BA-{m} n={n} failed to embed"
        assert validate(emb, g, hw) == []


def test_metrics():
    hw = complete(4)
    emb = Embedding(chains={0: frozenset({0, 1}), 1: frozenset({2})})
    m = metrics(emb, hw, embed_time=0.5)
    assert m.avg_chain_len == pytest.approx(1.5)
    assert m.max_chain_len == 2
    assert m.used_qubits == 3
    assert m.unused_qubits == 1
    assert m.embed_time == 0.5


def test_embedding_serialization():
    emb = Embedding(chains={3: frozenset({7, 5}), 1: frozenset({0})})
    back = Embedding.from_dict(emb.to_dict())
    assert back.chains == emb.chains


def test_isolated_source_vertex():
    hw = complete(4)
    source = {0: {1}, 1: {0}, 2: set()}
    emb = find_embedding(source, hw, EmbedderParams(seed=0))
    assert emb is not None
    assert validate(emb, source, hw) == []
    assert len(emb.chains) == 3
