"""Command-line surface wiring the pipelines into reproducible runs.

Exit codes: 0 success, 2 config/parameter error, 3 I/O error,
4 embedding failure.
"""

from __future__ import annotations

import csv
import io
import json
import sys

import click

from chainskip import bench, runtime, skipper, skipper_g
from chainskip._util import atomic_write_text
from chainskip.embed import EmbedderParams
from chainskip.errors import ConfigError, EmbeddingFailure
from chainskip.hwgraph import HardwareGraph, chimera, complete, grid
from chainskip.ising import BRUTE_FORCE_LIMIT, IsingModel
from chainskip.qmi import ChainStrengthPolicy
from chainskip.sampler import SamplerConfig, make_sampler

EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_EMBED = 4

_CONFIG_KEYS = {
    "model",
    "scheme",
    "cuts",
    "sampler",
    "reads",
    "sweeps",
    "noise_p",
    "hw",
    "seed",
    "out",
    "b_max",
    "chain_strength",
    "embed_timeout",
    "embed_tries",
    "embed_max_no_improvement",
    "nodes",
    "attach",
    "linear",
    "family",
    "cut_list",
}


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def parse_hw(spec: str) -> HardwareGraph | None:
    """Parse a hardware spec like chimera:4,4,4 / grid:5,7 / complete:8."""
    if spec in ("none", ""):
        return None
    try:
        kind, _, rest = spec.partition(":")
        args = [int(x) for x in rest.split(",")] if rest else []
        if kind == "chimera" and len(args) == 3:
            return chimera(*args)
        if kind == "grid" and len(args) == 2:
            return grid(*args)
        if kind == "complete" and len(args) == 1:
            return complete(*args)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad hardware spec {spec!r}: {exc}") from exc
    raise ConfigError(f"bad hardware spec {spec!r}")


def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path) as handle:
            data = json.load(handle)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot read config {path}: {exc}")
    except json.JSONDecodeError as exc:
        _fail(EXIT_CONFIG, f"config {path} is not valid JSON: {exc}")
    if not isinstance(data, dict):
        _fail(EXIT_CONFIG, "config must be a JSON object")
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        _fail(EXIT_CONFIG, f"unknown config keys: {sorted(unknown)}")
    return data


def _read_model(path) -> IsingModel:
    try:
        with open(path) as handle:
            return IsingModel.from_json(handle.read())
    except OSError as exc:
        _fail(EXIT_IO, f"cannot read model {path}: {exc}")
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        _fail(EXIT_CONFIG, f"model file {path} is malformed: {exc}")


def _write(path, text):
    try:
        atomic_write_text(path, text)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot write {path}: {exc}")


@click.group()
def main():
    """Chain-aware pruning experiments for annealer-style Ising models."""


@main.command()
@click.option("--nodes", "-n", type=int, required=True, help="Node count.")
@click.option("--attach", "-m", type=int, required=True, help="Preferential attachment factor (1..6).")
@click.option("--linear", type=click.Choice(["zero", "normal"]), default="zero", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), required=True)
def generate(nodes, attach, linear, seed, out):
    """Generate a power-law benchmark model as JSON."""
    try:
        params = bench.BAParams(n=nodes, m=attach, seed=seed, linear_mode=linear)
    except ValueError as exc:
        _fail(EXIT_CONFIG, str(exc))
    model = bench.ba_model(params)
    payload = model.to_dict()
    payload["provenance"] = {
        "generator": "barabasi-albert",
        "n": nodes,
        "m": attach,
        "linear_mode": linear,
        "seed": seed,
    }
    _write(out, json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n")
    click.echo(f"wrote {out} ({model.num_variables} variables, {len(model.J)} couplings)")


@main.command()
@click.option("--model", "model_path", type=click.Path(), help="Model JSON path.")
@click.option("--scheme", type=click.Choice(["baseline", "skipper", "skipper-g"]), default=None)
@click.option("--cuts", type=int, default=None, help="Chains to cut (0..11).")
@click.option("--sampler", "sampler_kind", type=click.Choice(["exact", "sa"]), default=None)
@click.option("--reads", type=int, default=None)
@click.option("--sweeps", type=int, default=None)
@click.option("--noise-p", type=float, default=None, help="Per-qubit flip probability.")
@click.option("--hw", "hw_spec", default=None, help="chimera:m,n,t | grid:r,c | complete:n | none")
@click.option("--seed", type=int, default=None)
@click.option("--b-max", type=int, default=None, help="Balanced-chain brute-force threshold.")
@click.option("--chain-strength", type=float, default=None, help="Ferromagnetic penalty scale.")
@click.option("--embed-timeout", type=float, default=None)
@click.option("--embed-tries", type=int, default=None)
@click.option("--embed-max-no-improvement", type=int, default=None)
@click.option("--out", type=click.Path(), default=None)
@click.option("--config", "config_path", type=click.Path(), default=None, help="JSON defaults for any option.")
def run(config_path, **options):
    """Run a pruning pipeline on a model and write a run report."""
    cfg = _load_config(config_path)

    def opt(name, default=None):
        value = options.get(name)
        if value is None:
            value = cfg.get(name, default)
        return value

    model_path = opt("model_path") or cfg.get("model")
    out = opt("out")
    if model_path is None or out is None:
        _fail(EXIT_CONFIG, "--model and --out are required")
    scheme = opt("scheme", "baseline")
    cuts = int(opt("cuts", 0))
    sampler_kind = opt("sampler_kind") or cfg.get("sampler", "sa")
    reads = int(opt("reads", 4000))
    sweeps = int(opt("sweeps", 1000))
    noise_p = float(opt("noise_p", 0.0))
    hw_spec = opt("hw_spec")
    if hw_spec is None:
        hw_spec = cfg.get("hw", "none")
    seed = int(opt("seed", 0))
    b_max = int(opt("b_max", 10))
    chain_strength = opt("chain_strength")
    embedder = EmbedderParams(
        timeout=float(opt("embed_timeout", 10.0)),
        tries=int(opt("embed_tries", 5)),
        max_no_improvement=int(opt("embed_max_no_improvement", 5)),
        seed=seed,
    )

    model = _read_model(model_path)
    try:
        hw = parse_hw(hw_spec)
        sampler_cfg = SamplerConfig(num_reads=reads, seed=seed, sweeps=sweeps)
        sampler = make_sampler(sampler_kind, sampler_cfg, noise_p=noise_p)
        policy = (
            ChainStrengthPolicy(mode="scaled", value=chain_strength)
            if chain_strength is not None
            else None
        )
        if scheme == "skipper-g":
            result = skipper_g.run(
                model,
                cuts,
                sampler,
                hw=hw,
                embedder_params=embedder,
                chain_strength=policy,
                b_max=b_max,
                seed=seed,
            )
        else:
            if scheme == "baseline":
                cuts = 0
            result = skipper.run(
                model,
                cuts,
                sampler,
                hw=hw,
                embedder_params=embedder,
                chain_strength=policy,
                b_max=b_max,
                seed=seed,
            )
    except EmbeddingFailure as exc:
        _fail(EXIT_EMBED, str(exc))
    except (ConfigError, ValueError) as exc:
        _fail(EXIT_CONFIG, str(exc))

    report = {
        "config": {
            "model": str(model_path),
            "scheme": scheme,
            "cuts": cuts,
            "sampler": sampler_kind,
            "reads": reads,
            "sweeps": sweeps,
            "noise_p": noise_p,
            "hw": hw_spec,
            "seed": seed,
            "b_max": b_max,
            "chain_strength": chain_strength,
            "embed_timeout": embedder.timeout,
            "embed_tries": embedder.tries,
            "embed_max_no_improvement": embedder.max_no_improvement,
        },
        "result": result.to_dict(),
    }
    if model.num_variables <= BRUTE_FORCE_LIMIT:
        _, ground = model.brute_force_ground()
        report["ground_energy"] = ground
        report["energy_residual"] = bench.energy_residual(
            result.best.energy, ground
        )
    _write(out, json.dumps(report, indent=2, sort_keys=True) + "\n")
    click.echo(
        f"{scheme} finished: best energy {result.best.energy:.6f}, "
        f"{result.n_qmi} executions"
    )


@main.command()
@click.option("--family", required=True, help="Graph family, e.g. ba:3.")
@click.option("--hw", "hw_spec", required=True)
@click.option("--cut-list", "--cuts", "cut_list", default="0", show_default=True, help="Comma-separated cut counts.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--embed-timeout", type=float, default=10.0, show_default=True)
@click.option("--embed-tries", type=int, default=3, show_default=True)
@click.option("--embed-max-no-improvement", type=int, default=3, show_default=True)
@click.option("--out", type=click.Path(), required=True)
def capacity(family, hw_spec, cut_list, seed, embed_timeout, embed_tries, embed_max_no_improvement, out):
    """Sweep cut counts and report hardware capacity per count as CSV."""
    try:
        kind, _, rest = family.partition(":")
        if kind != "ba":
            raise ConfigError(f"unknown family {family!r}")
        m = int(rest)
        cut_values = [int(x) for x in cut_list.split(",") if x.strip() != ""]
        if any(c < 0 or c > skipper.MAX_CUTS for c in cut_values):
            raise ConfigError(f"cut counts must be within 0..{skipper.MAX_CUTS}")
        hw = parse_hw(hw_spec)
        if hw is None:
            raise ConfigError("capacity search needs real hardware")
    except (ConfigError, ValueError) as exc:
        _fail(EXIT_CONFIG, str(exc))

    params = EmbedderParams(
        timeout=embed_timeout,
        tries=embed_tries,
        max_no_improvement=embed_max_no_improvement,
        seed=seed,
    )

    def graph_family(n):
        if n <= m:
            return {v: set(range(n)) - {v} for v in range(n)}
        return bench.ba_graph(bench.BAParams(n=n, m=m, seed=seed))

    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(
        [
            "family",
            "m",
            "c",
            "seed",
            "capacity",
            "avg_chain",
            "max_chain",
            "variance",
            "unused_qubits",
            "ER",
        ]
    )
    for c in cut_values:
        cap, witness = bench.capacity_search(
            graph_family, hw, c=c, embedder_params=params, n_start=max(2, c + 2)
        )
        row = [f"ba-{m}", m, c, seed, cap]
        if witness is not None:
            row += [
                f"{witness.avg_chain_len:.4f}",
                witness.max_chain_len,
                f"{witness.chain_len_variance:.4f}",
                witness.unused_qubits,
            ]
        else:
            row += ["", "", "", ""]
        row.append("")  # ER applies to sampled runs, not capacity probes
        writer.writerow(row)
        click.echo(f"ba-{m} c={c}: capacity {cap}")
    _write(out, buffer.getvalue())


@main.command("runtime-model")
@click.option("--cuts", type=int, default=11, show_default=True)
@click.option("--halved/--no-halved", default=False, show_default=True, help="Zero-linear symmetry halving for the exhaustive scheme.")
@click.option("--t-emb-baseline", type=float, default=1800.0, show_default=True)
@click.option("--t-net", type=float, default=1.0, show_default=True)
@click.option("--t-classical", type=float, default=2.0, show_default=True)
@click.option("--t-p", type=float, default=0.0, show_default=True)
@click.option("--delta", type=float, default=0.010, show_default=True)
@click.option("--t-s", type=float, default=0.0005, show_default=True)
@click.option("--reads", type=int, default=4000, show_default=True)
@click.option("--out", type=click.Path(), required=True)
def runtime_model(cuts, halved, t_emb_baseline, t_net, t_classical, t_p, delta, t_s, reads, out):
    """Emit the scheme x access-mode runtime table as CSV."""
    try:
        params = runtime.RuntimeParams(
            t_emb_baseline=t_emb_baseline,
            t_net=t_net,
            t_classical=t_classical,
            t_p=t_p,
            delta=delta,
            t_s=t_s,
            reads=reads,
        )
        if cuts < 0 or cuts > skipper.MAX_CUTS:
            raise ConfigError(f"cut count must be within 0..{skipper.MAX_CUTS}")
        rows = runtime.runtime_table(params, cuts, symmetry_halved=halved)
    except (ConfigError, ValueError) as exc:
        _fail(EXIT_CONFIG, str(exc))
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(
        ["scheme", "mode", "c", "n_qmi", "total_s", "total_parallel_qmi_s"]
    )
    for row in rows:
        writer.writerow(
            [
                row.scheme,
                row.mode,
                row.c,
                row.n_qmi,
                f"{row.total:.4f}",
                f"{row.total_parallel_qmi:.4f}",
            ]
        )
    _write(out, buffer.getvalue())
    click.echo(f"wrote {out}")


if __name__ == "__main__":
    main()
