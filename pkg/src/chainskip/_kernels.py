"""Hot numeric kernels.

The inner loops here dominate runtime (annealing sweeps, weighted
shortest paths during embedding). By default they are compiled with
numba; setting the environment variable ``CHAINSKIP_NO_NUMBA=1`` before
import selects the plain-Python fallback instead. Both paths run the
same function body, so results are bit-identical.

``benchmarks/kernel_bench.py`` compares the two paths.
"""

import math
import os

import numpy as np

NUMBA_ENABLED = os.environ.get("CHAINSKIP_NO_NUMBA", "").strip().lower() not in (
    "1",
    "true",
    "yes",
)

if NUMBA_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        NUMBA_ENABLED = False

_INF = np.inf


def _maybe_compile(fn):
    if NUMBA_ENABLED:
        return njit(cache=True)(fn)
    return fn


def metropolis_reads_py(spins, uniforms, betas, h, indptr, indices, weights):
    """Single-spin Metropolis sweeps over a batch of independent reads.

    spins: (reads, n) float64, +/-1, updated in place.
    uniforms: (reads, sweeps, n) acceptance draws in [0, 1).
    betas: (sweeps,) inverse temperatures.
    h, indptr/indices/weights: linear terms and CSR coupling graph.
    """
    reads, n = spins.shape
    sweeps = betas.shape[0]
    for r in range(reads):
        z = spins[r]
        for t in range(sweeps):
            beta = betas[t]
            for i in range(n):
                field = h[i]
                for k in range(indptr[i], indptr[i + 1]):
                    field += weights[k] * z[indices[k]]
                d_e = -2.0 * z[i] * field
                if d_e <= 0.0 or uniforms[r, t, i] < math.exp(-beta * d_e):
                    z[i] = -z[i]


def dijkstra_py(indptr, indices, node_weight, source_mask, dist, parent):
    """Vertex-weighted multi-source shortest paths (dense O(N^2) scan).

    Entering node y costs node_weight[y]; source nodes cost 0. Fills
    dist (float64) and parent (int64, -1 for sources/unreached).
    """
    n = node_weight.shape[0]
    done = np.zeros(n, dtype=np.bool_)
    for i in range(n):
        parent[i] = -1
        if source_mask[i]:
            dist[i] = 0.0
        else:
            dist[i] = _INF
    for _ in range(n):
        best = -1
        best_d = _INF
        for i in range(n):
            if not done[i] and dist[i] < best_d:
                best = i
                best_d = dist[i]
        if best < 0:
            break
        done[best] = True
        for k in range(indptr[best], indptr[best + 1]):
            j = indices[k]
            cand = best_d + node_weight[j]
            if cand < dist[j]:
                dist[j] = cand
                parent[j] = best


metropolis_reads = _maybe_compile(metropolis_reads_py)
dijkstra = _maybe_compile(dijkstra_py)
