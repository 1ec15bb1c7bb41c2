"""Chain-aware pruning pipelines for quantum annealers.

Provides an Ising model core, hardware connectivity graphs, a heuristic
minor embedder, chain-strength mapping to hardware-level models, simulated
and exact samplers, chain repair on readout, and the skipper / skipper-g
pruning pipelines with an analytical runtime model.
"""

from chainskip.ising import IsingModel, Sample, SampleSet
from chainskip.hwgraph import HardwareGraph
from chainskip.embed import Embedding, EmbedderParams, EmbeddingMetrics

__all__ = [
    "IsingModel",
    "Sample",
    "SampleSet",
    "HardwareGraph",
    "Embedding",
    "EmbedderParams",
    "EmbeddingMetrics",
]

__version__ = "0.1.0"
