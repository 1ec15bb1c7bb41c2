"""Chain repair: majority vote, balanced completion, sqc descent."""

import itertools

import numpy as np
import pytest

from chainskip.embed import Embedding
from chainskip.errors import MissingVariableError
from chainskip.hwgraph import grid
from chainskip.ising import IsingModel, Sample, SampleSet
from chainskip.unembed import (
    _best_completion,
    majority_vote,
    sqc,
    unembed_sample,
    unembed_sampleset,
)


def test_majority_vote_examples():
    assert majority_vote([1, 1, 1, -1, 1]) == 1
    assert majority_vote([-1, -1, 1]) == -1
    assert majority_vote([1, -1]) == 0
    assert majority_vote([1]) == 1


def test_unembed_intact_chains():
    model = IsingModel(h={0: 1.0}, J={(0, 1): -1.0})
    emb = Embedding(chains={0: frozenset({10, 11}), 1: frozenset({12})})
    hw_assignment = {10: -1, 11: -1, 12: -1}
    sample, stats = unembed_sample(hw_assignment, emb, model)
    assert sample.assignment == {0: -1, 1: -1}
    assert stats.broken_chain_count == 0
    assert stats.balanced_chain_count == 0


def test_unembed_broken_majority():
    model = IsingModel(h={}, J={(0, 1): 1.0})
    emb = Embedding(chains={0: frozenset({0, 1, 2}), 1: frozenset({3})})
    sample, stats = unembed_sample({0: 1, 1: 1, 2: -1, 3: 1}, emb, model)
    assert sample.assignment[0] == 1
    assert stats.broken_chain_count == 1
    assert stats.balanced_chain_count == 0


def test_balanced_chain_brute_force_optimal():
    # Balanced chain on qubit 0; completion must pick the better spin.
    model = IsingModel(h={0: 2.0}, J={(0, 1): 0.5})
    emb = Embedding(chains={0: frozenset({0, 1}), 1: frozenset({2})})
    sample, stats = unembed_sample({0: 1, 1: -1, 2: 1}, emb, model)
    assert stats.balanced_chain_count == 1
    assert stats.repaired_by_bruteforce
    assert sample.assignment[0] == -1  # h=2 prefers spin -1
    assert sample.energy == model.energy(sample.assignment)


def test_completion_matches_exhaustive_search():
    rng = np.random.default_rng(31)
    for _ in range(20):
        n = 5
        model = IsingModel(
            h={v: float(rng.standard_normal()) for v in range(n)},
            J={
                (i, j): float(rng.standard_normal())
                for i in range(n)
                for j in range(i + 1, n)
                if rng.random() < 0.7
            },
            variables=frozenset(range(n)),
        )
        b = int(rng.integers(1, n + 1))
        open_qubits = sorted(rng.choice(n, size=b, replace=False).tolist())
        partial = {
            v: int(rng.integers(0, 2)) * 2 - 1
            for v in range(n)
            if v not in open_qubits
        }
        got = _best_completion(model, partial, open_qubits)
        best_e = min(
            model.energy({**partial, **dict(zip(open_qubits, spins))})
            for spins in itertools.product((-1, 1), repeat=b)
        )
        assert model.energy(got) == pytest.approx(best_e, abs=1e-12)


def test_many_balanced_chains_random_path_deterministic():
    n = 12
    model = IsingModel(h={}, J={}, variables=frozenset(range(n)))
    emb = Embedding(chains={v: frozenset({2 * v, 2 * v + 1}) for v in range(n)})
    hw_assignment = {}
    for v in range(n):
        hw_assignment[2 * v] = 1
        hw_assignment[2 * v + 1] = -1
    a, stats_a = unembed_sample(hw_assignment, emb, model, b_max=10, seed=42)
    b, stats_b = unembed_sample(hw_assignment, emb, model, b_max=10, seed=42)
    assert stats_a.repaired_randomly and not stats_a.repaired_by_bruteforce
    assert stats_a.balanced_chain_count == n
    assert a.assignment == b.assignment
    c, _ = unembed_sample(hw_assignment, emb, model, b_max=10, seed=43)
    assert set(c.assignment) == set(a.assignment)


def test_missing_qubit_raises():
    model = IsingModel(h={}, J={}, variables=frozenset({0}))
    emb = Embedding(chains={0: frozenset({5})})
    with pytest.raises(MissingVariableError):
        unembed_sample({}, emb, model)


def test_unembed_sampleset_aggregates():
    model = IsingModel(h={}, J={(0, 1): -1.0})
    emb = Embedding(chains={0: frozenset({0, 1}), 1: frozenset({2})})
    reads = SampleSet(
        samples=(
            Sample(assignment={0: 1, 1: 1, 2: 1}, energy=0.0, occurrences=3),
            Sample(assignment={0: 1, 1: -1, 2: 1}, energy=0.0, occurrences=2),
        ),
        num_reads=5,
    )
    ss, stats = unembed_sampleset(reads, emb, model)
    assert ss.num_reads == 5
    assert len(stats) == 2
    # Both reads resolve to (1, 1) after repair, so they merge.
    assert len(ss.samples) == 1
    assert ss.samples[0].occurrences == 5


def test_sqc_descends_to_local_minimum():
    rng = np.random.default_rng(32)
    for _ in range(20):
        n = 7
        model = IsingModel(
            h={v: float(rng.standard_normal()) for v in range(n)},
            J={
                (i, j): float(rng.standard_normal())
                for i in range(n)
                for j in range(i + 1, n)
                if rng.random() < 0.5
            },
            variables=frozenset(range(n)),
        )
        start = {v: int(rng.integers(0, 2)) * 2 - 1 for v in range(n)}
        out = sqc(model, start)
        base = model.energy(out)
        assert base <= model.energy(start) + 1e-12
        for q in range(n):
            flipped = dict(out)
            flipped[q] = -flipped[q]
            assert model.energy(flipped) >= base - 1e-12


def test_sqc_ground_state_is_fixed_point():
    model = IsingModel(h={0: -1.0}, J={(0, 1): -1.0})
    ground, _ = model.brute_force_ground()
    assert sqc(model, ground) == ground
