"""Command-line harness: channel analysis, random-channel scatter data,
reference-curve and mixture sweeps, all as deterministic CSV/JSON.

Exit codes: 0 success, 2 parse/usage error, 3 channel validation failure,
4 internal numeric failure.  All outputs are byte-deterministic for a fixed
(config, seed), serial or parallel.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from phasedamp.assistance import OptimizerConfig, quantumness_of_assistance
from phasedamp.bloch import bloch_volume, extremality_certificate
from phasedamp.channels import (
    TETRAHEDRAL_ANGLE,
    PhaseDampingChannel,
    completely_decohering,
    matrix_from_json,
    mcmq_channel,
    mix_channels,
    tetra_channel,
    validate_channel,
)
from phasedamp.choi import choi_purity
from phasedamp.sampling import sample_batch

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_NUMERIC = 4

DEFAULTS = {
    "seed": None,
    "restarts": 20,
    "tol": 1e-7,
    "k": None,
    "threads": 1,
    "max_iters": 500,
    "volume_tol": 1e-7,
    "points": 41,
    "count": 2000,
    "count2": 500,
    "count3": 500,
    "count4": 500,
}

SAMPLE_HEADER = "index,seed,rank,v_b,purity,q_a,e_a_lower,converged"


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved settings of one CLI invocation (flags > config file > defaults)."""

    command: str
    input_path: str | None
    output_path: str | None
    json_out: str | None
    seed: int
    restarts: int
    objective_tol: float
    decomposition_len: int | None
    max_iters: int
    threads: int
    volume_tol: float
    points: int
    count: int
    count2: int
    count3: int
    count4: int
    manifest: bool

    def __post_init__(self):
        for name in ("count", "count2", "count3", "count4", "points", "restarts"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.objective_tol <= 0 or self.volume_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    def optimizer(self, seed: int | None = None) -> OptimizerConfig:
        return OptimizerConfig(
            restarts=self.restarts,
            decomposition_len=self.decomposition_len,
            max_iters=self.max_iters,
            objective_tol=self.objective_tol,
            seed=self.seed if seed is None else seed,
        )


def _fmt(x) -> str:
    return format(float(x), ".12g")


def _write_csv(path: str, header: str, rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _sample_rows(records, index_offset: int = 0):
    for pos, rec in enumerate(records):
        yield (
            str(index_offset + pos),
            str(rec.seed),
            str(rec.rank),
            _fmt(rec.v_b),
            _fmt(rec.purity),
            _fmt(rec.q_a),
            _fmt(rec.e_a_lower),
            "1" if rec.converged else "0",
        )


def _derived_seed(seed: int, *key: int) -> int:
    seq = np.random.SeedSequence(entropy=seed, spawn_key=tuple(key))
    return int(seq.generate_state(1, np.uint64)[0])


def _grid_metrics(channel: PhaseDampingChannel, cfg: RunConfig, point_seed: int):
    result = quantumness_of_assistance(channel, cfg.optimizer(seed=point_seed))
    return bloch_volume(channel), choi_purity(channel), result.q_a


def _mcmq_rows(cfg: RunConfig):
    grid = np.linspace(0.0, TETRAHEDRAL_ANGLE, cfg.points)
    rows = []
    for i, alpha in enumerate(grid):
        v, p, q = _grid_metrics(
            mcmq_channel(float(alpha)), cfg, _derived_seed(cfg.seed, i, 2)
        )
        rows.append((_fmt(alpha), _fmt(v), _fmt(p), _fmt(q)))
    return rows


def _curve_sidecar_path(out: str) -> str:
    p = Path(out)
    return str(p.with_name(p.stem + "_mcmq" + p.suffix))


def _maybe_manifest(cfg: RunConfig) -> None:
    if not cfg.manifest:
        return
    payload = json.dumps(asdict(cfg), indent=2, sort_keys=True)
    target = cfg.output_path or cfg.json_out
    if target:
        Path(target + ".manifest.json").write_text(payload + "\n")
    else:
        print(payload, file=sys.stderr)


def cmd_analyze(cfg: RunConfig) -> int:
    try:
        text = Path(cfg.input_path).read_text()
        n, matrix = matrix_from_json(text)
    except (OSError, ValueError) as exc:
        print(f"error: cannot parse channel file: {exc}", file=sys.stderr)
        return EXIT_PARSE
    report = validate_channel(matrix)
    if not report.accepted:
        print(json.dumps(report.as_dict(), indent=2))
        return EXIT_VALIDATION
    channel = PhaseDampingChannel(n, matrix)
    cert = extremality_certificate(channel, tol=cfg.volume_tol)
    result = quantumness_of_assistance(channel, cfg.optimizer())
    sub_applicable = cert.rank_r >= 2 and cert.rank_r**2 < n
    out = {
        "n": n,
        "rank": cert.rank_r,
        "v_b": bloch_volume(channel),
        "subvolume": cert.best_volume if sub_applicable else None,
        "subvolume_indices": list(cert.witness_indices) if sub_applicable else None,
        "purity": choi_purity(channel),
        "q_a": result.q_a,
        "e_a_lower": result.e_a_lower,
        "certified_non_ru": cert.certified_non_ru,
        "converged": result.converged,
        "note": result.note,
    }
    payload = json.dumps(out, indent=2)
    print(payload)
    if cfg.json_out:
        Path(cfg.json_out).write_text(payload + "\n")
    _maybe_manifest(cfg)
    return EXIT_OK


def cmd_figure2(cfg: RunConfig) -> int:
    records = sample_batch(
        cfg.count, 4, 2, cfg.seed, opt=cfg.optimizer(), threads=cfg.threads
    )
    _write_csv(cfg.output_path, SAMPLE_HEADER, _sample_rows(records))
    _write_csv(
        _curve_sidecar_path(cfg.output_path), "alpha,v_b,purity,q_a", _mcmq_rows(cfg)
    )
    _maybe_manifest(cfg)
    return EXIT_OK


def cmd_figure3(cfg: RunConfig) -> int:
    rows = []
    offset = 0
    for rank, count in ((2, cfg.count2), (3, cfg.count3), (4, cfg.count4)):
        records = sample_batch(
            count,
            4,
            rank,
            _derived_seed(cfg.seed, rank),
            opt=cfg.optimizer(),
            threads=cfg.threads,
        )
        rows.extend(_sample_rows(records, index_offset=offset))
        offset += count
    _write_csv(cfg.output_path, SAMPLE_HEADER, rows)
    _write_csv(
        _curve_sidecar_path(cfg.output_path), "alpha,v_b,purity,q_a", _mcmq_rows(cfg)
    )
    _maybe_manifest(cfg)
    return EXIT_OK


def cmd_mcmq_curve(cfg: RunConfig) -> int:
    if cfg.points < 2:
        print("error: need at least 2 grid points", file=sys.stderr)
        return EXIT_PARSE
    _write_csv(cfg.output_path, "alpha,v_b,purity,q_a", _mcmq_rows(cfg))
    _maybe_manifest(cfg)
    return EXIT_OK


def cmd_lambda_sweep(cfg: RunConfig) -> int:
    if cfg.points < 2:
        print("error: need at least 2 grid points", file=sys.stderr)
        return EXIT_PARSE
    start = tetra_channel()
    end = completely_decohering(4)
    rows = []
    for i, lam in enumerate(np.linspace(0.0, 1.0, cfg.points)):
        channel = mix_channels([start, end], [1.0 - lam, lam])
        v, p, q = _grid_metrics(channel, cfg, _derived_seed(cfg.seed, i, 2))
        rows.append((_fmt(lam), _fmt(v), _fmt(p), _fmt(q)))
    _write_csv(cfg.output_path, "lambda,v_b,purity,q_a", rows)
    _maybe_manifest(cfg)
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "figure2": cmd_figure2,
    "figure3": cmd_figure3,
    "mcmq-curve": cmd_mcmq_curve,
    "lambda-sweep": cmd_lambda_sweep,
}

# commands whose metrics depend on random sampling must be seeded explicitly
SEED_REQUIRED = {"figure2", "figure3", "lambda-sweep"}


def _add_shared(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, help="base random seed (required for sampling commands)")
    p.add_argument("--restarts", type=int, help="optimizer restarts per channel (default 20)")
    p.add_argument("--tol", type=float, dest="tol", help="optimizer objective tolerance (default 1e-7)")
    p.add_argument("--k", type=int, help="decomposition length (default rank^2, capped at 16)")
    p.add_argument("--max-iters", type=int, dest="max_iters", help="optimizer iteration cap (default 500)")
    p.add_argument("--threads", type=int, help="worker processes for sampling (default 1)")
    p.add_argument("--volume-tol", type=float, dest="volume_tol", help="volume threshold for the non-RU certificate (default 1e-7)")
    p.add_argument("--config", help="JSON file with default option values")
    p.add_argument("--manifest", action="store_true", help="write the resolved config next to the output")


SCATTER_SCHEMA = (
    "CSV columns: index (row number), seed (stream seed used for the row), "
    "rank, v_b (Bloch-simplex volume), purity, q_a (quantumness, an "
    "overestimate), e_a_lower (assistance entanglement lower bound, bits), "
    "converged (1 if the two best restarts agreed). Numbers carry 12 "
    "significant digits; output is byte-deterministic for fixed seed, serial "
    "or parallel."
)
CURVE_SCHEMA = "CSV columns: alpha (polar angle), v_b, purity, q_a."
SWEEP_SCHEMA = "CSV columns: lambda (mixing weight), v_b, purity, q_a."


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasedamp",
        description="Phase-damping channel metrics: Bloch-simplex volume, purity, quantumness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "analyze",
        help="metrics report for one channel JSON file",
        epilog="Reads {\"n\": N, \"d\": [[[re, im], ...], ...]} and prints a JSON "
        "report with rank, v_b, subvolume (+ indices, when rank^2 < N), purity, "
        "q_a, e_a_lower, certified_non_ru and converged.",
    )
    p.add_argument("--in", dest="input_path", required=True, help="channel JSON file")
    p.add_argument("--json-out", dest="json_out", help="also write the report to this file")
    _add_shared(p)

    p = sub.add_parser(
        "figure2",
        help="quantumness vs volume scatter for random rank-2 channels",
        epilog=SCATTER_SCHEMA + " A reference-curve sidecar <out>_mcmq<ext> is written too.",
    )
    p.add_argument("--count", type=int, help="number of channels (default 2000)")
    p.add_argument("--points", type=int, help="grid points of the sidecar reference curve (default 41)")
    p.add_argument("--out", dest="output_path", required=True, help="output CSV")
    _add_shared(p)

    p = sub.add_parser(
        "figure3",
        help="quantumness vs purity scatter for ranks 2, 3 and 4",
        epilog=SCATTER_SCHEMA + " Each rank block draws from a seed derived from "
        "--seed and the rank, recorded in the seed column. A reference-curve "
        "sidecar <out>_mcmq<ext> is written too.",
    )
    p.add_argument("--count2", type=int, help="rank-2 channels (default 500)")
    p.add_argument("--count3", type=int, help="rank-3 channels (default 500)")
    p.add_argument("--count4", type=int, help="rank-4 channels (default 500)")
    p.add_argument("--points", type=int, help="grid points of the sidecar reference curve (default 41)")
    p.add_argument("--out", dest="output_path", required=True, help="output CSV")
    _add_shared(p)

    p = sub.add_parser(
        "mcmq-curve",
        help="reference curve of the maximal-quantumness family",
        epilog=CURVE_SCHEMA,
    )
    p.add_argument("--points", type=int, help="grid points (default 41)")
    p.add_argument("--out", dest="output_path", required=True, help="output CSV")
    _add_shared(p)

    p = sub.add_parser(
        "lambda-sweep",
        help="mixtures of the tetrahedral and completely decohering channels",
        epilog=SWEEP_SCHEMA,
    )
    p.add_argument("--points", type=int, help="grid points (default 41)")
    p.add_argument("--out", dest="output_path", required=True, help="output CSV")
    _add_shared(p)

    return parser


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    file_cfg = {}
    if getattr(args, "config", None):
        file_cfg = json.loads(Path(args.config).read_text())
        if not isinstance(file_cfg, dict):
            raise ValueError("config file must contain a JSON object")

    def pick(name, default):
        value = getattr(args, name, None)
        if value is not None:
            return value
        if name in file_cfg:
            return file_cfg[name]
        return default

    seed = pick("seed", DEFAULTS["seed"])
    if seed is None:
        if args.command in SEED_REQUIRED:
            raise ValueError(f"{args.command} requires --seed (no wall-clock default)")
        seed = 0

    return RunConfig(
        command=args.command,
        input_path=getattr(args, "input_path", None),
        output_path=getattr(args, "output_path", None),
        json_out=getattr(args, "json_out", None),
        seed=int(seed),
        restarts=int(pick("restarts", DEFAULTS["restarts"])),
        objective_tol=float(pick("tol", DEFAULTS["tol"])),
        decomposition_len=pick("k", DEFAULTS["k"]),
        max_iters=int(pick("max_iters", DEFAULTS["max_iters"])),
        threads=int(pick("threads", DEFAULTS["threads"])),
        volume_tol=float(pick("volume_tol", DEFAULTS["volume_tol"])),
        points=int(pick("points", DEFAULTS["points"])),
        count=int(pick("count", DEFAULTS["count"])),
        count2=int(pick("count2", DEFAULTS["count2"])),
        count3=int(pick("count3", DEFAULTS["count3"])),
        count4=int(pick("count4", DEFAULTS["count4"])),
        manifest=bool(getattr(args, "manifest", False)),
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        return COMMANDS[args.command](cfg)
    except Exception as exc:  # anything unexpected is a numeric/internal failure
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
