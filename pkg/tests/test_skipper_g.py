"""Depth-first greedy pipeline: feature, indexing, never-worse."""

import math

import numpy as np
import pytest

from chainskip import skipper_g
from chainskip.hwgraph import chimera
from chainskip.ising import IsingModel, Sample, SampleSet
from chainskip.sampler import SamplerConfig, make_sampler


def random_model(rng, n):
    return IsingModel(
        h={v: float(rng.standard_normal()) for v in range(n)},
        J={
            (i, j): float(rng.standard_normal())
            for i in range(n)
            for j in range(i + 1, n)
            if rng.random() < 0.5
        },
        variables=frozenset(range(n)),
    )


def exact_sampler():
    return make_sampler("exact", SamplerConfig(num_reads=1))


def test_node_feature_formula():
    ss = SampleSet(
        samples=(
            Sample(assignment={0: -1}, energy=-2.0, occurrences=3),
            Sample(assignment={0: 1}, energy=-1.0, occurrences=1),
        ),
        num_reads=4,
    )
    # E_min = -2, EV = (3*-2 + 1*-1)/4 = -1.75
    assert ss.min_energy() == -2.0
    assert skipper_g.node_feature(ss) == pytest.approx(abs(1.0 / (-2.0 * -1.75)))


def test_node_feature_zero_product_is_inf():
    ss = SampleSet(
        samples=(Sample(assignment={0: 1}, energy=0.0, occurrences=1),),
        num_reads=1,
    )
    assert skipper_g.node_feature(ss) == math.inf


def test_qmi_count_is_2c_plus_1():
    rng = np.random.default_rng(51)
    model = random_model(rng, 12)
    sampler = exact_sampler()
    for c in (0, 1, 3, 5):
        result = skipper_g.run(model, c, sampler)
        assert result.n_qmi == 2 * c + 1


def test_tree_indexing_2x_rule():
    rng = np.random.default_rng(52)
    model = random_model(rng, 10)
    result = skipper_g.run(model, 3, exact_sampler())
    assert result.path[0] == 1
    for parent, child in zip(result.path, result.path[1:]):
        assert child in (2 * parent, 2 * parent + 1)
    # first descent from the root leads to nodes 2 and 3
    level1 = sorted(n.index for n in result.nodes if n.level == 1)
    assert level1 == [2, 3]


def test_left_child_fixes_minus_one():
    rng = np.random.default_rng(53)
    model = random_model(rng, 8)
    result = skipper_g.run(model, 2, exact_sampler())
    for node in result.nodes:
        if node.level == 0:
            continue
        new_q = set(node.fixing) - set(
            next(
                p.fixing
                for p in result.nodes
                if p.index == node.index // 2
            )
        )
        q = new_q.pop()
        assert node.fixing[q] == (-1 if node.index % 2 == 0 else 1)


def test_never_worse_than_root():
    rng = np.random.default_rng(54)
    sampler = exact_sampler()
    for _ in range(20):
        model = random_model(rng, int(rng.integers(4, 11)))
        c = int(rng.integers(0, 4))
        result = skipper_g.run(model, c, sampler)
        root = next(n for n in result.nodes if n.index == 1)
        assert result.best.energy <= root.best_energy + 1e-12


def test_exact_descent_recovers_ground():
    rng = np.random.default_rng(55)
    sampler = exact_sampler()
    for _ in range(10):
        model = random_model(rng, 8)
        _, ground = model.brute_force_ground()
        result = skipper_g.run(model, 3, sampler)
        # With exact sub-solves every node's decoded best is the global
        # minimum of its subtree and the root already covers everything.
        assert result.best.energy == pytest.approx(ground, abs=0)


def test_run_with_hardware():
    rng = np.random.default_rng(56)
    hw = chimera(2, 2, 4)
    model = random_model(rng, 6)
    _, ground = model.brute_force_ground()
    result = skipper_g.run(model, 2, exact_sampler(), hw=hw, seed=1)
    assert result.n_qmi == 5
    assert result.best.energy == pytest.approx(ground, abs=1e-9)


def test_result_serialization():
    rng = np.random.default_rng(57)
    model = random_model(rng, 6)
    result = skipper_g.run(model, 2, exact_sampler())
    d = result.to_dict()
    assert d["path"][0] == 1
    assert len(d["nodes"]) == 5
    assert d["best"]["energy"] == result.best.energy


def test_cut_bounds():
    model = IsingModel(h={}, J={(0, 1): 1.0})
    with pytest.raises(ValueError):
        skipper_g.run(model, 3, exact_sampler())
