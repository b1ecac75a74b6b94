"""Simulation parameters: defaults, config-file parsing, overrides, validation.

The file format is flat ``key = value`` text with ``#`` comments; the nested
weight set uses dotted keys (``weights.a``). Every key doubles as a CLI flag.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

from .geometry import Reuse


class ConfigError(ValueError):
    """Malformed, unknown, or invariant-violating configuration input."""


@dataclass(frozen=True)
class WeightSet:
    """Cost-function weights: a (rate) > 0, b (edge coverage) > 0, c (power) < 0."""

    a: float
    b: float
    c: float


def _default_grid() -> tuple[float, ...]:
    return tuple(round(0.05 * i, 10) for i in range(21))


@dataclass(frozen=True)
class SimConfig:
    """All physical and run parameters. Immutable once validated."""

    cell_radius_m: float = 500.0
    alpha: float = 3.0
    epsilon: float = 0.5
    reuse: Reuse = Reuse.FR1
    target_sinr_db: float = 0.0
    n_trials: int = 10_000
    n_distance_bins: int = 10
    master_seed: int = 12345
    max_tx_power_dbm: float = 43.0
    noise_psd_dbm_hz: float = -174.0
    subcarriers_per_prb: int = 12
    subcarrier_spacing_hz: float = 15_000.0
    edge_band_fraction: float = 0.1
    weights: WeightSet = field(default_factory=lambda: WeightSet(1.75, 1.0, -1.25))
    epsilon_grid: tuple[float, ...] = field(default_factory=_default_grid)

    def with_updates(self, **changes) -> "SimConfig":
        """Typed field replacement with re-validation."""
        cfg = dataclasses.replace(self, **changes)
        validate(cfg)
        return cfg


_INT_KEYS = {"n_trials", "n_distance_bins", "master_seed", "subcarriers_per_prb"}
_FLOAT_KEYS = {
    "cell_radius_m",
    "alpha",
    "epsilon",
    "target_sinr_db",
    "max_tx_power_dbm",
    "noise_psd_dbm_hz",
    "subcarrier_spacing_hz",
    "edge_band_fraction",
    "weights.a",
    "weights.b",
    "weights.c",
}
KNOWN_KEYS = _INT_KEYS | _FLOAT_KEYS | {"reuse", "epsilon_grid"}


def _parse_grid(text: str) -> tuple[float, ...]:
    """Grid syntax: 'start:stop:step' (inclusive) or a comma-separated list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError("grid range must be start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValueError("grid range needs step > 0 and stop >= start")
        n = int(round((stop - start) / step))
        vals = [round(start + i * step, 10) for i in range(n + 1)]
        return tuple(v for v in vals if v <= stop + 1e-9)
    return tuple(float(p) for p in text.split(",") if p.strip())


def _convert(key: str, raw: str):
    raw = raw.strip()
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            value = float(raw)
            if math.isnan(value):
                raise ValueError("NaN is not a valid setting")
            return value
        if key == "reuse":
            return Reuse.parse(raw)
        if key == "epsilon_grid":
            return _parse_grid(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: invalid value {raw!r} ({exc})") from None
    raise ConfigError(f"unknown key '{key}'")


def _apply(cfg: SimConfig, key: str, value) -> SimConfig:
    if key.startswith("weights."):
        w = dataclasses.replace(cfg.weights, **{key.split(".", 1)[1]: value})
        return dataclasses.replace(cfg, weights=w)
    return dataclasses.replace(cfg, **{key: value})


def validate(cfg: SimConfig) -> SimConfig:
    """Check every invariant; error messages always name the offending key."""
    def fail(msg: str):
        raise ConfigError(msg)

    if not cfg.cell_radius_m > 0:
        fail("cell_radius_m must be positive")
    if not cfg.alpha >= 2:
        fail("alpha must be ≥ 2")
    if not 0 <= cfg.epsilon <= 1:
        fail("epsilon must be in [0, 1]")
    if not isinstance(cfg.reuse, Reuse):
        fail("reuse must be FR1 or FR3")
    if not math.isfinite(cfg.target_sinr_db):
        fail("target_sinr_db must be finite")
    if cfg.n_trials < 1:
        fail("n_trials must be >= 1")
    if cfg.n_distance_bins < 1:
        fail("n_distance_bins must be >= 1")
    if not 0 <= cfg.master_seed < 2**64:
        fail("master_seed must fit in an unsigned 64-bit integer")
    if not math.isfinite(cfg.max_tx_power_dbm):
        fail("max_tx_power_dbm must be finite")
    if math.isnan(cfg.noise_psd_dbm_hz) or cfg.noise_psd_dbm_hz == math.inf:
        fail("noise_psd_dbm_hz must be finite or -inf")
    if cfg.subcarriers_per_prb < 1:
        fail("subcarriers_per_prb must be >= 1")
    if not cfg.subcarrier_spacing_hz > 0:
        fail("subcarrier_spacing_hz must be positive")
    if not 0 < cfg.edge_band_fraction < 1:
        fail("edge_band_fraction must be in (0, 1)")
    if not cfg.weights.a > 0:
        fail("weights.a must be positive")
    if not cfg.weights.b > 0:
        fail("weights.b must be positive")
    if not cfg.weights.c < 0:
        fail("weights.c must be negative")
    if not cfg.epsilon_grid:
        fail("epsilon_grid must be nonempty")
    if any(not 0 <= e <= 1 for e in cfg.epsilon_grid):
        fail("epsilon_grid entries must be in [0, 1]")
    if any(b <= a for a, b in zip(cfg.epsilon_grid, cfg.epsilon_grid[1:])):
        fail("epsilon_grid must be strictly increasing")
    return cfg


def _parse_pairs(text: str) -> list[tuple[str, str, int]]:
    """(key, raw value, line number) triples from file text; syntax checks only."""
    pairs = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {stripped!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key '{key}'")
        pairs.append((key, raw, lineno))
    return pairs


def parse_config(text: str, base: SimConfig | None = None) -> SimConfig:
    """File values overlaid on the defaults (or on an explicit base config)."""
    cfg = base if base is not None else SimConfig()
    for key, raw, lineno in _parse_pairs(text):
        try:
            cfg = _apply(cfg, key, _convert(key, raw))
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
    return validate(cfg)


def merge_overrides(base: SimConfig, overrides: list[str]) -> SimConfig:
    """Apply 'key=value' overrides (CLI flags use the file key names) and re-validate."""
    cfg = base
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must look like key=value, got {item!r}")
        key, raw = (part.strip() for part in item.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"unknown key '{key}'")
        cfg = _apply(cfg, key, _convert(key, raw))
    return validate(cfg)


def serialize_config(cfg: SimConfig) -> str:
    """Canonical text form; parse(serialize(cfg)) == cfg."""
    lines = [
        f"cell_radius_m = {cfg.cell_radius_m!r}",
        f"alpha = {cfg.alpha!r}",
        f"epsilon = {cfg.epsilon!r}",
        f"reuse = {cfg.reuse.value}",
        f"target_sinr_db = {cfg.target_sinr_db!r}",
        f"n_trials = {cfg.n_trials}",
        f"n_distance_bins = {cfg.n_distance_bins}",
        f"master_seed = {cfg.master_seed}",
        f"max_tx_power_dbm = {cfg.max_tx_power_dbm!r}",
        f"noise_psd_dbm_hz = {cfg.noise_psd_dbm_hz!r}",
        f"subcarriers_per_prb = {cfg.subcarriers_per_prb}",
        f"subcarrier_spacing_hz = {cfg.subcarrier_spacing_hz!r}",
        f"edge_band_fraction = {cfg.edge_band_fraction!r}",
        f"weights.a = {cfg.weights.a!r}",
        f"weights.b = {cfg.weights.b!r}",
        f"weights.c = {cfg.weights.c!r}",
        "epsilon_grid = " + ",".join(repr(e) for e in cfg.epsilon_grid),
    ]
    return "\n".join(lines) + "\n"
