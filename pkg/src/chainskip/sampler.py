"""Executors turning an Ising model into a SampleSet.

Three flavors: an exact enumerator (stand-in oracle for hardware), a
simulated-annealing sampler with independent restarts per read, and a
spin-flip noise wrapper that corrupts any inner sampler's reads.

All samplers are deterministic given (model, config): read r draws from
the rng stream seeded by SeedSequence([seed, r]), so results do not
depend on execution order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from chainskip import _kernels
from chainskip.ising import BRUTE_FORCE_LIMIT, IsingModel, Sample, SampleSet

# Keep per-kernel-call buffers around this many bytes.
_BATCH_BUDGET = 64 << 20

Sampler = Callable[[IsingModel], SampleSet]


@dataclass(frozen=True)
class SamplerConfig:
    num_reads: int = 4000
    seed: int = 0
    sweeps: int = 1000
    beta_start: float = 0.1
    beta_end: float = 10.0

    def __post_init__(self):
        if self.num_reads < 1:
            raise ValueError("num_reads must be >= 1")
        if self.sweeps < 1:
            raise ValueError("sweeps must be >= 1")
        if self.beta_start <= 0 or self.beta_end <= 0:
            raise ValueError("inverse temperatures must be positive")


def _read_rng(seed: int, read: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, read]))


def _aggregate(model: IsingModel, order, spins: np.ndarray) -> SampleSet:
    """Group identical reads, recompute energies, sort by quality."""
    num_reads = spins.shape[0]
    counts: dict[bytes, int] = {}
    for r in range(num_reads):
        key = spins[r].tobytes()
        counts[key] = counts.get(key, 0) + 1
    samples = []
    for key, occ in counts.items():
        row = np.frombuffer(key, dtype=spins.dtype)
        assignment = {v: int(row[k]) for k, v in enumerate(order)}
        samples.append(
            Sample(
                assignment=assignment,
                energy=model.energy(assignment),
                occurrences=occ,
            )
        )
    samples.sort(key=lambda s: (s.energy, s.spins_tuple()))
    return SampleSet(samples=tuple(samples), num_reads=num_reads)


def exact_sample(model: IsingModel, cfg: SamplerConfig) -> SampleSet:
    """Return the exact ground state as a single sample."""
    assignment, energy = model.brute_force_ground(limit=BRUTE_FORCE_LIMIT)
    return SampleSet(
        samples=(
            Sample(
                assignment=assignment, energy=energy, occurrences=cfg.num_reads
            ),
        ),
        num_reads=cfg.num_reads,
    )


def sa_sample(model: IsingModel, cfg: SamplerConfig) -> SampleSet:
    """Simulated annealing: independent random restarts, single-spin
    Metropolis sweeps over a geometric inverse-temperature schedule."""
    order = model.sorted_variables()
    n = len(order)
    if n == 0:
        sample = Sample(assignment={}, energy=model.offset, occurrences=cfg.num_reads)
        return SampleSet(samples=(sample,), num_reads=cfg.num_reads)

    index = {v: k for k, v in enumerate(order)}
    h = np.array([model.h.get(v, 0.0) for v in order], dtype=np.float64)
    neigh = {k: [] for k in range(n)}
    for (i, j), coef in sorted(model.J.items()):
        neigh[index[i]].append((index[j], coef))
        neigh[index[j]].append((index[i], coef))
    indptr = np.zeros(n + 1, dtype=np.int64)
    indices = []
    weights = []
    for k in range(n):
        entries = sorted(neigh[k])
        indptr[k + 1] = indptr[k] + len(entries)
        indices.extend(e[0] for e in entries)
        weights.extend(e[1] for e in entries)
    indices = np.array(indices, dtype=np.int64)
    weights = np.array(weights, dtype=np.float64)
    betas = np.geomspace(cfg.beta_start, cfg.beta_end, cfg.sweeps)

    per_read_bytes = (cfg.sweeps + 1) * n * 8
    batch = max(1, _BATCH_BUDGET // per_read_bytes)
    all_spins = np.empty((cfg.num_reads, n), dtype=np.int8)
    read = 0
    while read < cfg.num_reads:
        count = min(batch, cfg.num_reads - read)
        spins = np.empty((count, n), dtype=np.float64)
        uniforms = np.empty((count, cfg.sweeps, n), dtype=np.float64)
        for r in range(count):
            rng = _read_rng(cfg.seed, read + r)
            spins[r] = rng.integers(0, 2, size=n) * 2.0 - 1.0
            uniforms[r] = rng.random((cfg.sweeps, n))
        _kernels.metropolis_reads(
            spins, uniforms, betas, h, indptr, indices, weights
        )
        all_spins[read : read + count] = spins.astype(np.int8)
        read += count
    return _aggregate(model, order, all_spins)


def with_flip_noise(inner: Sampler, p: float, seed: int) -> Sampler:
    """Wrap a sampler so each qubit of each read flips with probability p."""
    if not 0.0 <= p < 1.0:
        raise ValueError("flip probability must be in [0, 1)")

    def noisy(model: IsingModel) -> SampleSet:
        clean = inner(model)
        if p == 0.0 or model.num_variables == 0:
            return clean
        order = model.sorted_variables()
        n = len(order)
        rows = np.empty((clean.num_reads, n), dtype=np.int8)
        pos = 0
        for s in clean.samples:
            row = np.array([s.assignment[v] for v in order], dtype=np.int8)
            rows[pos : pos + s.occurrences] = row
            pos += s.occurrences
        rng = np.random.default_rng(np.random.SeedSequence([seed]))
        flips = rng.random(rows.shape) < p
        rows[flips] *= -1
        return _aggregate(model, order, rows)

    return noisy


def make_sampler(
    kind: str, cfg: SamplerConfig, noise_p: float = 0.0, noise_seed: int | None = None
) -> Sampler:
    """Build a model -> SampleSet callable for the pipelines."""
    if kind == "exact":
        base: Sampler = lambda model: exact_sample(model, cfg)
    elif kind == "sa":
        base = lambda model: sa_sample(model, cfg)
    else:
        raise ValueError(f"unknown sampler kind {kind!r}")
    if noise_p > 0.0:
        base = with_flip_noise(
            base, noise_p, cfg.seed if noise_seed is None else noise_seed
        )
    return base
