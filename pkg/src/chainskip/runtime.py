"""Analytical end-to-end runtime model.

T = T_emb + N_QMI * (T_queue + T_QMI + T_net) + T_classical, with
T_QMI = min(t_p + delta + r * t_s, cap) and the embedding time shrinking
proportionally with the number of cut chains.
"""

from __future__ import annotations

from dataclasses import dataclass

from chainskip.errors import ConfigError

SCHEMES = ("baseline", "skipper", "skipper-g")
MODES = ("shared", "dedicated")


@dataclass(frozen=True)
class RuntimeParams:
    t_emb_baseline: float = 1800.0
    t_net: float = 1.0
    t_classical: float = 2.0
    t_p: float = 0.0
    delta: float = 0.010
    t_s: float = 0.0005
    reads: int = 4000
    t_qmi_cap: float = 2.0
    queue_shared: float = 1.0
    queue_dedicated: float = 0.0

    def __post_init__(self):
        for name in (
            "t_emb_baseline",
            "t_net",
            "t_classical",
            "t_p",
            "delta",
            "t_s",
            "t_qmi_cap",
            "queue_shared",
            "queue_dedicated",
        ):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative")
        if self.reads < 0:
            raise ConfigError("reads must be non-negative")

    def queue_time(self, mode: str) -> float:
        if mode == "shared":
            return self.queue_shared
        if mode == "dedicated":
            return self.queue_dedicated
        raise ConfigError(f"unknown access mode {mode!r}")


def t_qmi(params: RuntimeParams) -> float:
    """Per-execution time, capped by the provider's job limit."""
    return min(
        params.t_p + params.delta + params.reads * params.t_s, params.t_qmi_cap
    )


def t_emb(params: RuntimeParams, c: int) -> float:
    """Embedding time: baseline for c=0, shrinking as baseline/c after."""
    if c < 0:
        raise ConfigError("cut count must be non-negative")
    if c == 0:
        return params.t_emb_baseline
    return params.t_emb_baseline / c


def expected_n_qmi(scheme: str, c: int, symmetry_halved: bool = False) -> int:
    if scheme == "baseline":
        return 1
    if scheme == "skipper":
        if c == 0:
            return 1
        return 1 << (c - 1) if symmetry_halved else 1 << c
    if scheme == "skipper-g":
        return 2 * c + 1
    raise ConfigError(f"unknown scheme {scheme!r}")


@dataclass(frozen=True)
class RuntimeEstimate:
    scheme: str
    mode: str
    c: int
    n_qmi: int
    total: float
    total_parallel_qmi: float

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "mode": self.mode,
            "c": self.c,
            "n_qmi": self.n_qmi,
            "total": self.total,
            "total_parallel_qmi": self.total_parallel_qmi,
        }


def total_runtime(
    params: RuntimeParams,
    n_qmi: int,
    c: int,
    scheme: str,
    mode: str = "shared",
) -> RuntimeEstimate:
    """End-to-end runtime; also reports the variant where all QMIs run
    in parallel on dedicated hardware (per-job terms counted once)."""
    if scheme not in SCHEMES:
        raise ConfigError(f"unknown scheme {scheme!r}")
    if scheme == "baseline" and n_qmi != 1:
        raise ConfigError("baseline runs exactly one QMI")
    if scheme == "skipper":
        if c == 0:
            allowed = {1}
        else:
            allowed = {1 << c, 1 << (c - 1)}
        if n_qmi not in allowed:
            raise ConfigError(
                f"skipper with c={c} runs {sorted(allowed)} QMIs, not {n_qmi}"
            )
    if scheme == "skipper-g" and n_qmi != 2 * c + 1:
        raise ConfigError(f"skipper-g with c={c} runs {2 * c + 1} QMIs")

    if scheme == "skipper":
        emb = t_emb(params, c)
    else:
        # Per-level embeddings run in parallel; the uncut root dominates.
        emb = params.t_emb_baseline

    per_job = params.queue_time(mode) + t_qmi(params) + params.t_net
    total = emb + n_qmi * per_job + params.t_classical
    parallel = emb + per_job + params.t_classical
    return RuntimeEstimate(
        scheme=scheme,
        mode=mode,
        c=c,
        n_qmi=n_qmi,
        total=total,
        total_parallel_qmi=parallel,
    )


def runtime_table(
    params: RuntimeParams, c: int, symmetry_halved: bool = False
) -> list[RuntimeEstimate]:
    """Scheme x mode table at a given cut count."""
    rows = []
    for scheme in SCHEMES:
        n_qmi = expected_n_qmi(scheme, c, symmetry_halved)
        for mode in MODES:
            rows.append(
                total_runtime(
                    params,
                    n_qmi,
                    0 if scheme == "baseline" else c,
                    scheme,
                    mode,
                )
            )
    return rows
