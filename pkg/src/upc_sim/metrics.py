"""Monte Carlo estimators for the three headline metrics.

Average transmit power has an exact closed form used as a cross-check; the
coverage estimators average the exact fading oracle over random geometry
(variance reduction: the fading dimension costs nothing); average rate draws
explicit fading because E[ln(1 + SINR)] has no closed form here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import tx_power_norm, unit_exponential
from .config import SimConfig
from .geometry import (
    Reuse,
    build_layout,
    cochannel_set,
    sample_interferer_positions,
    sample_radius,
    sample_radius_band,
)
from .sinr import (
    coverage_given_positions,
    db_to_linear,
    interference_weights,
    noise_variance_norm,
    signal_coefficient,
)
from .streams import Streams, combine_moments, moments, run_chunks


@dataclass(frozen=True)
class CoverageBin:
    r_mid: float
    coverage: float
    n: int
    stderr: float


@dataclass(frozen=True)
class CoverageCurve:
    """Distance-binned coverage probabilities for one (eps, reuse, alpha, T) setting."""

    bins: tuple[CoverageBin, ...]

    def nearest_bin(self, r: float) -> CoverageBin:
        return min(self.bins, key=lambda b: abs(b.r_mid - r))


@dataclass(frozen=True)
class MetricsRow:
    """One epsilon grid point: power, edge coverage, rate, and their stderrs."""

    epsilon: float
    p_avg: float
    edge_coverage: float
    avg_rate_nats: float
    p_avg_stderr: float = 0.0
    edge_coverage_stderr: float = 0.0
    avg_rate_stderr: float = 0.0


def avg_tx_power_closed(epsilon: float, alpha: float) -> float:
    """Exact mean normalized transmit power: 2 / (alpha*epsilon + 2).

    This is the integral of (r/R)^(alpha*eps) against the density 2r/R^2.
    """
    return 2.0 / (alpha * epsilon + 2.0)


def _estimate(streams, tag, n_total, workers, chunk_values, indices=()):
    """Chunked (mean, stderr): per-chunk streams keep results worker-independent."""
    def worker(chunk_idx, m):
        rng = streams.stream(tag, *indices, chunk_idx)
        return moments(chunk_values(rng, m))

    return combine_moments(run_chunks(n_total, worker, workers))


def avg_tx_power_mc(
    epsilon: float,
    alpha: float,
    R: float,
    n: int,
    streams: Streams,
    tag: str | None = None,
    workers: int = 1,
) -> tuple[float, float]:
    """Sample mean of the normalized transmit power over the distance density."""
    if tag is None:
        tag = f"p_avg/eps={epsilon:.6g}/alpha={alpha:.6g}"

    def values(rng, m):
        return tx_power_norm(sample_radius(rng, R, size=m), epsilon, alpha, R)

    return _estimate(streams, tag, n, workers, values)


def _drop_coverage_values(rng, m, layout, cochannel, r, epsilon, alpha, R, sigma2, T):
    r_i, d_i = sample_interferer_positions(layout, cochannel, rng, m)
    return coverage_given_positions(r, r_i, d_i, epsilon, alpha, R, sigma2, T)


def coverage_curve(
    config: SimConfig,
    epsilon: float,
    reuse: Reuse,
    streams: Streams | None = None,
    workers: int = 1,
    tag: str | None = None,
    cochannel: np.ndarray | None = None,
) -> CoverageCurve:
    """Coverage vs distance: per-bin mean of the fading oracle over n_trials drops.

    The tagged radius is pinned to each bin midpoint; only interferer geometry
    is random. Bin stderr uses the binomial bound sqrt(p(1-p)/n). cochannel
    overrides the reuse-derived interferer cell set when given.
    """
    reuse = Reuse(reuse)
    if streams is None:
        streams = Streams(config.master_seed)
    if tag is None:
        tag = f"coverage/{reuse.value}/eps={epsilon:.6g}"
    R = config.cell_radius_m
    layout = build_layout(R)
    if cochannel is None:
        cochannel = cochannel_set(layout, reuse)
    sigma2 = noise_variance_norm(config).sigma2_norm
    T = db_to_linear(config.target_sinr_db)
    n = config.n_trials

    bins = []
    for b in range(config.n_distance_bins):
        r_mid = (b + 0.5) * R / config.n_distance_bins

        def values(rng, m, r_mid=r_mid):
            return _drop_coverage_values(
                rng, m, layout, cochannel, r_mid, epsilon, config.alpha, R, sigma2, T
            )

        def worker(chunk_idx, m, values=values, b=b):
            vals = values(streams.stream(tag, b, chunk_idx), m)
            return vals.size, float(np.sum(vals))

        parts = run_chunks(n, worker, workers)
        total = sum(p[0] for p in parts)
        p_cov = math.fsum(p[1] for p in parts) / total
        stderr = math.sqrt(max(0.0, p_cov * (1.0 - p_cov)) / total)
        bins.append(CoverageBin(r_mid=r_mid, coverage=p_cov, n=total, stderr=stderr))
    return CoverageCurve(bins=tuple(bins))


def edge_coverage(
    config: SimConfig,
    epsilon: float,
    reuse: Reuse,
    streams: Streams | None = None,
    workers: int = 1,
    tag: str | None = None,
    cochannel: np.ndarray | None = None,
) -> tuple[float, float]:
    """Mean oracle coverage with the tagged radius drawn from the outer band.

    The band is [(1 - edge_band_fraction) * R, R] under the same 2r/R^2 law.
    """
    reuse = Reuse(reuse)
    if streams is None:
        streams = Streams(config.master_seed)
    if tag is None:
        tag = f"edge/{reuse.value}/eps={epsilon:.6g}"
    R = config.cell_radius_m
    layout = build_layout(R)
    if cochannel is None:
        cochannel = cochannel_set(layout, reuse)
    sigma2 = noise_variance_norm(config).sigma2_norm
    T = db_to_linear(config.target_sinr_db)
    r_min = (1.0 - config.edge_band_fraction) * R

    def values(rng, m):
        r = sample_radius_band(rng, R, r_min, size=m)
        r_i, d_i = sample_interferer_positions(layout, cochannel, rng, m)
        return coverage_given_positions(
            r, r_i, d_i, epsilon, config.alpha, R, sigma2, T
        )

    return _estimate(streams, tag, config.n_trials, workers, values)


def avg_rate(
    config: SimConfig,
    epsilon: float,
    reuse: Reuse,
    streams: Streams | None = None,
    workers: int = 1,
    tag: str | None = None,
    bandwidth_penalty: bool = False,
) -> tuple[float, float]:
    """Mean Shannon rate E[ln(1 + SINR)] in nats over full randomness.

    Geometry and fading are both sampled: no closed form is assumed for the
    log average. bandwidth_penalty scales FR3 by 1/3 (one third of the band);
    off by default since the plain per-PRB comparison is the baseline.
    """
    reuse = Reuse(reuse)
    if streams is None:
        streams = Streams(config.master_seed)
    if tag is None:
        tag = f"rate/{reuse.value}/eps={epsilon:.6g}/alpha={config.alpha:.6g}"
    R = config.cell_radius_m
    layout = build_layout(R)
    cochannel = cochannel_set(layout, reuse)
    sigma2 = noise_variance_norm(config).sigma2_norm
    factor = (1.0 / 3.0) if (bandwidth_penalty and reuse is Reuse.FR3) else 1.0

    def values(rng, m):
        r = sample_radius(rng, R, size=m)
        r_i, d_i = sample_interferer_positions(layout, cochannel, rng, m)
        g = unit_exponential(rng, size=m)
        h = unit_exponential(rng, size=r_i.shape)
        s = signal_coefficient(r, epsilon, config.alpha, R)
        w = interference_weights(r_i, d_i, epsilon, config.alpha, R)
        eta = g * s / (sigma2 + np.sum(h * w, axis=1))
        return factor * np.log1p(eta)

    return _estimate(streams, tag, config.n_trials, workers, values)
