"""Seeded Monte Carlo study of the uplink fractional power-control factor.

A mobile at distance r from its base station transmits at the fraction
(r/R)^(alpha*eps) of the power cap. The package sweeps eps over [0, 1] on a
two-tier hexagonal grid and reports the resulting trade-off between average
transmit power, distance-resolved coverage probability, and average rate,
plus a weighted cost function for picking an operating point.
"""

from .channel import FadingDraw, path_gain, sample_fading, tx_power_norm, unit_exponential
from .config import (
    ConfigError,
    SimConfig,
    WeightSet,
    merge_overrides,
    parse_config,
    serialize_config,
    validate,
)
from .geometry import (
    CellLayout,
    Reuse,
    UserDrop,
    build_layout,
    cochannel_set,
    sample_drop,
    sample_interferer_positions,
    sample_radius,
    sample_radius_band,
)
from .metrics import (
    CoverageBin,
    CoverageCurve,
    MetricsRow,
    avg_rate,
    avg_tx_power_closed,
    avg_tx_power_mc,
    coverage_curve,
    edge_coverage,
)
from .sinr import (
    NoiseModel,
    SinrSample,
    conditional_coverage,
    coverage_fading_mc,
    coverage_given_positions,
    db_to_linear,
    instantaneous_sinr,
    linear_to_db,
    noise_variance_norm,
)
from .streams import Streams
from .sweep import (
    PRESET_WEIGHTS,
    CostBreakdown,
    SweepTable,
    cost,
    cost_table,
    metric_columns,
    select_epsilon,
    sweep_epsilon,
)

__version__ = "0.1.0"
