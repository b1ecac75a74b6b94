"""Subcommand front end: run the sweep experiments, emit deterministic CSV + manifest.

Subcommands: power-sweep, coverage, rate-sweep, cost-sweep, selftest.
Exit codes: 0 success, 1 usage/config error, 2 runtime failure.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .config import ConfigError, SimConfig, merge_overrides, parse_config, serialize_config
from .geometry import Reuse, build_layout, cochannel_set, sample_drop, sample_radius
from .metrics import avg_rate, avg_tx_power_closed, avg_tx_power_mc, coverage_curve, edge_coverage
from .sinr import conditional_coverage, coverage_fading_mc, db_to_linear, noise_variance_norm
from .streams import Streams
from .sweep import PRESET_WEIGHTS, cost_table, select_epsilon, sweep_epsilon

SEED_ENV_VAR = "UPC_SIM_SEED"

# (flag, config key); every config key is reachable from the command line.
_CONFIG_FLAGS = [
    ("--cell-radius-m", "cell_radius_m"),
    ("--alpha", "alpha"),
    ("--epsilon", "epsilon"),
    ("--reuse", "reuse"),
    ("--target-sinr-db", "target_sinr_db"),
    ("--n-trials", "n_trials"),
    ("--n-distance-bins", "n_distance_bins"),
    ("--master-seed", "master_seed"),
    ("--max-tx-power-dbm", "max_tx_power_dbm"),
    ("--noise-psd-dbm-hz", "noise_psd_dbm_hz"),
    ("--subcarriers-per-prb", "subcarriers_per_prb"),
    ("--subcarrier-spacing-hz", "subcarrier_spacing_hz"),
    ("--edge-band-fraction", "edge_band_fraction"),
    ("--weights-a", "weights.a"),
    ("--weights-b", "weights.b"),
    ("--weights-c", "weights.c"),
    ("--eps-grid", "epsilon_grid"),
]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _add_common_flags(sub: argparse.ArgumentParser):
    sub.add_argument("--config", metavar="FILE", help="config file loaded before flag overrides")
    sub.add_argument("--workers", type=int, default=1,
                     help="parallel chunk workers; output is identical for any value")
    sub.add_argument("--out", metavar="DIR", default=".", help="output directory")
    sub.add_argument("--interference-limited", action="store_true",
                     help="drop thermal noise entirely (noise PSD -> -inf)")
    for flag, key in _CONFIG_FLAGS:
        if key == "target_sinr_db":
            sub.add_argument(flag, "--target-db", metavar="V", dest=key)
        else:
            sub.add_argument(flag, metavar="V", dest=key)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="upc-sim",
                     description="Uplink fractional power control trade-off simulator")
    commands = parser.add_subparsers(dest="command")

    p = commands.add_parser("power-sweep", parents=[], add_help=True,
                            help="average transmit power vs power-control factor")
    _add_common_flags(p)
    p.set_defaults(handler=_cmd_power_sweep, presets=["alpha=4"])

    p = commands.add_parser("coverage", help="coverage probability vs distance")
    _add_common_flags(p)
    p.add_argument("--eps", default="0,0.25,0.5,0.75,1",
                   help="comma list of power-control factors, one CSV per value")
    p.set_defaults(handler=_cmd_coverage, presets=[])

    p = commands.add_parser("rate-sweep", help="average Shannon rate vs power-control factor")
    _add_common_flags(p)
    p.add_argument("--alphas", default="3,4", help="comma list of path-loss exponents")
    p.add_argument("--reuse-modes", default="fr1,fr3", help="comma list of reuse modes")
    p.add_argument("--bandwidth-penalty", action="store_true",
                   help="scale FR3 rate by 1/3 to charge for the narrower band")
    p.set_defaults(handler=_cmd_rate_sweep, presets=[])

    p = commands.add_parser("cost-sweep", help="cost function J over the epsilon grid")
    _add_common_flags(p)
    p.add_argument("--cost-normalization", choices=["minmax", "raw"], default="minmax")
    p.set_defaults(handler=_cmd_cost_sweep, presets=[])

    p = commands.add_parser("selftest", help="internal consistency checks")
    _add_common_flags(p)
    p.set_defaults(handler=_cmd_selftest, presets=[])

    return parser


def resolve_config(args) -> SimConfig:
    """defaults < env seed < subcommand presets < config file < explicit flags."""
    cfg = SimConfig()
    env_seed = os.environ.get(SEED_ENV_VAR)
    if env_seed is not None:
        cfg = merge_overrides(cfg, [f"master_seed={env_seed}"])
    if args.presets:
        cfg = merge_overrides(cfg, args.presets)
    if args.config:
        path = Path(args.config)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        cfg = parse_config(path.read_text(encoding="utf-8"), base=cfg)
    overrides = [f"{key}={getattr(args, key)}" for _, key in _CONFIG_FLAGS
                 if getattr(args, key) is not None]
    if args.interference_limited:
        overrides.append("noise_psd_dbm_hz=-inf")
    return merge_overrides(cfg, overrides)


def _format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("booleans have no CSV rendering")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.6g}"
    return str(value)


def emit_csv(header: list[str], rows, path: Path):
    """Header plus rows, floats at 6 significant digits, '\\n' endings."""
    lines = [",".join(header)]
    lines.extend(",".join(_format_cell(v) for v in row) for row in rows)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_manifest(out_dir: Path, name: str, subcommand: str, cfg: SimConfig,
                   outputs: list[Path], parameters: dict) -> Path:
    config_text = serialize_config(cfg)
    manifest = {
        "subcommand": subcommand,
        "config": config_text.splitlines(),
        "config_sha256": hashlib.sha256(config_text.encode("utf-8")).hexdigest(),
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "outputs": [p.name for p in outputs],
        "parameters": parameters,
    }
    path = out_dir / f"{name}.manifest.json"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _parse_float_list(text: str, what: str) -> list[float]:
    try:
        values = [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ConfigError(f"{what}: expected a comma list of numbers, got {text!r}") from None
    if not values:
        raise ConfigError(f"{what}: empty list")
    return values


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_power_sweep(cfg: SimConfig, args) -> int:
    out = _out_dir(args)
    streams = Streams(cfg.master_seed)
    rows = []
    for i, eps in enumerate(cfg.epsilon_grid):
        closed = avg_tx_power_closed(eps, cfg.alpha)
        mc, stderr = avg_tx_power_mc(eps, cfg.alpha, cfg.cell_radius_m, cfg.n_trials,
                                     streams, tag=f"power_sweep/{i}", workers=args.workers)
        rows.append((eps, closed, mc, stderr))
    csv_path = out / "power_sweep.csv"
    emit_csv(["epsilon", "p_avg_closed", "p_avg_mc", "stderr"], rows, csv_path)
    write_manifest(out, "power_sweep", "power-sweep", cfg, [csv_path],
                   {"workers": args.workers})
    print(f"power-sweep: {len(rows)} grid points, alpha={cfg.alpha:g}, "
          f"n={cfg.n_trials} -> {csv_path}")
    return 0


def _cmd_coverage(cfg: SimConfig, args) -> int:
    out = _out_dir(args)
    eps_list = _parse_float_list(args.eps, "--eps")
    outputs = []
    for eps in eps_list:
        curve = coverage_curve(cfg, eps, cfg.reuse, workers=args.workers)
        rows = [(b.r_mid, b.coverage, b.stderr, b.n) for b in curve.bins]
        csv_path = out / f"coverage_{cfg.reuse.value.lower()}_eps{eps:.6g}.csv"
        emit_csv(["r_m", "coverage", "stderr", "n"], rows, csv_path)
        outputs.append(csv_path)
    write_manifest(out, f"coverage_{cfg.reuse.value.lower()}", "coverage", cfg, outputs,
                   {"eps": eps_list, "workers": args.workers})
    print(f"coverage: {cfg.reuse.value}, alpha={cfg.alpha:g}, T={cfg.target_sinr_db:g} dB, "
          f"{len(eps_list)} curves x {cfg.n_distance_bins} bins -> {out}")
    return 0


def _cmd_rate_sweep(cfg: SimConfig, args) -> int:
    out = _out_dir(args)
    alphas = _parse_float_list(args.alphas, "--alphas")
    modes = [Reuse.parse(m) for m in args.reuse_modes.split(",") if m.strip()]
    rows = []
    for reuse in modes:
        for alpha in alphas:
            variant = cfg.with_updates(alpha=alpha)
            streams = Streams(variant.master_seed)
            for i, eps in enumerate(variant.epsilon_grid):
                rate, stderr = avg_rate(
                    variant, eps, reuse, streams,
                    tag=f"rate_sweep/{reuse.value}/alpha={alpha:.6g}/{i}",
                    workers=args.workers, bandwidth_penalty=args.bandwidth_penalty,
                )
                rows.append((eps, reuse.value, alpha, rate, stderr))
    csv_path = out / "rate_sweep.csv"
    emit_csv(["epsilon", "reuse", "alpha", "rate_nats", "stderr"], rows, csv_path)
    write_manifest(out, "rate_sweep", "rate-sweep", cfg, [csv_path],
                   {"alphas": alphas, "reuse_modes": [m.value for m in modes],
                    "bandwidth_penalty": args.bandwidth_penalty, "workers": args.workers})
    print(f"rate-sweep: {len(rows)} rows over reuse {'/'.join(m.value for m in modes)}, "
          f"alpha {args.alphas} -> {csv_path}")
    return 0


def _cmd_cost_sweep(cfg: SimConfig, args) -> int:
    out = _out_dir(args)
    table = sweep_epsilon(cfg, cfg.reuse, workers=args.workers,
                          normalization=args.cost_normalization)
    breakdowns = [cost_table(table, w) for _, w in PRESET_WEIGHTS]
    rows = []
    for i, row in enumerate(table.rows):
        rows.append((row.epsilon, row.p_avg, row.edge_coverage, row.avg_rate_nats,
                     breakdowns[0][i].j, breakdowns[1][i].j, breakdowns[2][i].j))
    csv_path = out / "cost_sweep.csv"
    emit_csv(["epsilon", "p_avg", "edge_cov", "rate_nats", "j_set1", "j_set2", "j_set3"],
             rows, csv_path)
    write_manifest(out, "cost_sweep", "cost-sweep", cfg, [csv_path],
                   {"normalization": args.cost_normalization, "workers": args.workers,
                    "presets": {name: [w.a, w.b, w.c] for name, w in PRESET_WEIGHTS}})
    picks = [f"{name}: eps={select_epsilon(table, w)[0]:g}" for name, w in PRESET_WEIGHTS]
    print(f"cost-sweep: argmax J {'; '.join(picks)} -> {csv_path}")
    return 0


def _selftest_checks(cfg: SimConfig, workers: int):
    """Yields (name, passed, detail) for the oracle-vs-MC consistency suite."""
    streams = Streams(cfg.master_seed)
    R = cfg.cell_radius_m

    # Closed-form power vs Monte Carlo, 3 stderr at every point.
    worst = 0.0
    ok = True
    for i, eps in enumerate((0.0, 0.25, 0.5, 0.75, 1.0)):
        for alpha in (3.0, 4.0):
            mc, se = avg_tx_power_mc(eps, alpha, R, 20_000, streams,
                                     tag=f"selftest/p_avg/{alpha:g}/{i}")
            diff = abs(mc - avg_tx_power_closed(eps, alpha))
            worst = max(worst, diff)
            if diff > max(3.0 * se, 1e-12):
                ok = False
    yield "closed-form power vs MC", ok, f"worst |diff| = {worst:.2e}"

    # Fading oracle vs indicator Monte Carlo on random drops.
    layout = build_layout(R)
    cochannel = cochannel_set(layout, Reuse.FR1)
    noise = noise_variance_norm(cfg)
    T = db_to_linear(cfg.target_sinr_db)
    rng = streams.stream("selftest/oracle_drops")
    worst = 0.0
    for _ in range(5):
        drop = sample_drop(layout, cochannel, rng)
        exact = conditional_coverage(drop, cfg.epsilon, cfg.alpha, R, noise, T)
        est, _ = coverage_fading_mc(drop, cfg.epsilon, cfg.alpha, R, noise, T,
                                    100_000, rng)
        worst = max(worst, abs(est - exact))
    yield "fading oracle vs indicator MC", worst < 0.01, f"worst |diff| = {worst:.4f}"

    # Distance-density sampler: KS distance against the (r/R)^2 CDF.
    samples = np.sort(sample_radius(streams.stream("selftest/ks"), R, size=100_000))
    cdf = (samples / R) ** 2
    n = len(samples)
    upper = np.max(np.arange(1, n + 1) / n - cdf)
    lower = np.max(cdf - np.arange(0, n) / n)
    ks = max(upper, lower)
    yield "distance density KS", ks < 0.01, f"KS = {ks:.4f}"

    # Worker-count independence of a chunked estimator.
    a = edge_coverage(cfg, 0.5, cfg.reuse, Streams(cfg.master_seed), workers=1)
    b = edge_coverage(cfg, 0.5, cfg.reuse, Streams(cfg.master_seed), workers=max(4, workers))
    yield "worker-count determinism", a == b, f"workers=1 vs {max(4, workers)}"


def _cmd_selftest(cfg: SimConfig, args) -> int:
    failures = 0
    for name, passed, detail in _selftest_checks(cfg, args.workers):
        print(f"selftest: {name}: {'PASS' if passed else 'FAIL'} ({detail})")
        failures += 0 if passed else 1
    print(f"selftest: {'all checks passed' if not failures else f'{failures} check(s) FAILED'}")
    return 0 if failures == 0 else 1


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help paths
        return int(exc.code or 0)
    if getattr(args, "command", None) is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.handler(cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failure contract
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
