"""Epsilon grid sweep, cost function J = a*rate + b*edge_cov + c*power, selection.

Metric columns are min-max normalized over the grid by default before
weighting, so weight sets stay scale-free (the raw metrics mix nats,
probabilities, and normalized power). Raw mode evaluates J literally.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .config import SimConfig, WeightSet
from .geometry import Reuse
from .metrics import MetricsRow, avg_rate, avg_tx_power_mc, edge_coverage
from .streams import Streams

NORMALIZATIONS = ("raw", "minmax")

# Shipped example weight sets. Calibrated on the default configuration
# (FR1, alpha=3, T=0 dB, minmax normalization, 0.05 grid) so that J peaks at
# the midpoint of the epsilon range; see README for the procedure.
PRESET_WEIGHTS: tuple[tuple[str, WeightSet], ...] = (
    ("balanced", WeightSet(1.75, 1.0, -1.25)),
    ("coverage_first", WeightSet(2.0, 1.5, -1.0)),
    ("battery_saver", WeightSet(1.75, 0.75, -1.5)),
)


@dataclass(frozen=True)
class CostBreakdown:
    """J and its three weighted contributions (a*rate, b*edge_cov, c*power)."""

    epsilon: float
    j: float
    terms: tuple[float, float, float]


@dataclass(frozen=True)
class SweepTable:
    """Raw metric rows per grid point plus the costing mode they feed."""

    rows: tuple[MetricsRow, ...]
    grid: tuple[float, ...]
    normalization: str = "minmax"

    def __post_init__(self):
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"normalization must be one of {NORMALIZATIONS}")
        if len(self.rows) != len(self.grid):
            raise ValueError("one row per grid point required")


def cost(
    rate: float,
    edge_cov: float,
    power: float,
    w: WeightSet,
    epsilon: float = math.nan,
) -> CostBreakdown:
    """Weighted scalarization; j is exactly the sum of the stored terms."""
    terms = (w.a * rate, w.b * edge_cov, w.c * power)
    return CostBreakdown(epsilon=epsilon, j=terms[0] + terms[1] + terms[2], terms=terms)


def _minmax(column: list[float]) -> list[float]:
    lo, hi = min(column), max(column)
    span = hi - lo
    if span == 0.0:
        return [0.0] * len(column)  # constant column carries no preference
    return [(v - lo) / span for v in column]


def metric_columns(table: SweepTable) -> tuple[list[float], list[float], list[float]]:
    """(rate, edge_cov, power) columns, normalized per the table's mode."""
    rate = [row.avg_rate_nats for row in table.rows]
    edge = [row.edge_coverage for row in table.rows]
    power = [row.p_avg for row in table.rows]
    if table.normalization == "minmax":
        return _minmax(rate), _minmax(edge), _minmax(power)
    return rate, edge, power


def cost_table(table: SweepTable, w: WeightSet) -> tuple[CostBreakdown, ...]:
    """Per-grid-point cost breakdowns for one weight set."""
    rate, edge, power = metric_columns(table)
    return tuple(
        cost(rate[i], edge[i], power[i], w, epsilon=table.grid[i])
        for i in range(len(table.grid))
    )


def select_epsilon(table: SweepTable, w: WeightSet) -> tuple[float, CostBreakdown]:
    """Grid point maximizing J; ties break toward larger epsilon (less transmit power)."""
    if not table.rows:
        raise ValueError("empty sweep table")
    best = None
    for breakdown in cost_table(table, w):
        if best is None or breakdown.j >= best.j:
            best = breakdown
    return best.epsilon, best


def sweep_epsilon(
    config: SimConfig,
    reuse: Reuse | None = None,
    workers: int = 1,
    normalization: str = "minmax",
    bandwidth_penalty: bool = False,
) -> SweepTable:
    """Estimate all three metrics at every grid epsilon.

    Each (metric, grid index) pair gets its own stream derived from the master
    seed, so the table is identical however the points are scheduled.
    """
    reuse = Reuse(reuse) if reuse is not None else config.reuse
    streams = Streams(config.master_seed)
    rows = []
    for i, eps in enumerate(config.epsilon_grid):
        p_avg, p_se = avg_tx_power_mc(
            eps, config.alpha, config.cell_radius_m, config.n_trials,
            streams, tag=f"sweep/p_avg/{i}", workers=workers,
        )
        edge, e_se = edge_coverage(
            config, eps, reuse, streams, tag=f"sweep/edge/{i}", workers=workers
        )
        rate, r_se = avg_rate(
            config, eps, reuse, streams, tag=f"sweep/rate/{i}", workers=workers,
            bandwidth_penalty=bandwidth_penalty,
        )
        rows.append(
            MetricsRow(
                epsilon=eps,
                p_avg=p_avg,
                edge_coverage=edge,
                avg_rate_nats=rate,
                p_avg_stderr=p_se,
                edge_coverage_stderr=e_se,
                avg_rate_stderr=r_se,
            )
        )
    return SweepTable(rows=tuple(rows), grid=tuple(config.epsilon_grid),
                      normalization=normalization)
