"""Uplink SINR evaluation and the fading-averaged coverage oracle.

Two power conventions are supported:

* normalized (default): transmit powers are fractions of the cap, so the
  tagged signal coefficient is (r/R)^(alpha*eps) * r^-alpha and the noise is
  sigma^2 / P_max.
* raw: the literal textbook form r^(alpha*(eps-1)) with a user-supplied
  sigma^2, handy for checking against hand calculations.

The two agree once sigma^2_norm = sigma^2_raw * R^(-alpha*eps).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import FadingDraw, unit_exponential
from .config import SimConfig
from .geometry import UserDrop


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class NoiseModel:
    """Noise power in the same units as the signal coefficients."""

    sigma2_norm: float

    def __post_init__(self):
        if self.sigma2_norm < 0:
            raise ValueError("sigma2_norm must be nonnegative")


@dataclass(frozen=True)
class SinrSample:
    eta: float
    signal: float
    interference: float


def noise_variance_norm(config: SimConfig) -> NoiseModel:
    """Thermal noise integrated over one PRB, normalized by the power cap.

    per-PRB noise [dBm] = PSD + 10 log10(subcarriers * spacing); dividing by
    P_max turns it into the normalized units used by signal_coefficient.
    """
    if config.noise_psd_dbm_hz == -math.inf:
        return NoiseModel(0.0)
    bandwidth_hz = config.subcarriers_per_prb * config.subcarrier_spacing_hz
    noise_dbm = config.noise_psd_dbm_hz + 10.0 * math.log10(bandwidth_hz)
    return NoiseModel(db_to_linear(noise_dbm - config.max_tx_power_dbm))


def signal_coefficient(r, epsilon: float, alpha: float, R: float, normalized: bool = True):
    """Received power per unit fading on the tagged link.

    normalized: (r/R)^(alpha*eps) * r^-alpha; raw: r^(alpha*(eps-1)).
    In normalized mode the power cap forces r <= R.
    """
    r = np.asarray(r, dtype=float)
    if normalized and (np.any(r <= 0) or np.any(r > R)):
        raise ValueError(f"r must be in (0, R={R}] under the normalized power law")
    scale = R if normalized else 1.0
    out = (r / scale) ** (alpha * epsilon) * r ** (-alpha)
    return float(out) if out.ndim == 0 else out


def interference_weights(r_i, d_i, epsilon: float, alpha: float, R: float,
                         normalized: bool = True):
    """Per-interferer received power per unit fading: (r_i/scale)^(alpha*eps) * d_i^-alpha."""
    r_i = np.asarray(r_i, dtype=float)
    d_i = np.asarray(d_i, dtype=float)
    scale = R if normalized else 1.0
    return (r_i / scale) ** (alpha * epsilon) * d_i ** (-alpha)


def instantaneous_sinr(
    drop: UserDrop,
    fading: FadingDraw,
    epsilon: float,
    alpha: float,
    R: float,
    noise: NoiseModel,
    normalized: bool = True,
) -> SinrSample:
    """One-shot SINR for a single geometric realization and fading draw."""
    if len(fading.h) != drop.n_interferers:
        raise ValueError(
            f"fading has {len(fading.h)} gains for {drop.n_interferers} interferers"
        )
    signal = fading.g * signal_coefficient(drop.r, epsilon, alpha, R, normalized)
    w = interference_weights(drop.r_i, drop.d_i, epsilon, alpha, R, normalized)
    interference = float(np.sum(fading.h * w))
    denom = noise.sigma2_norm + interference
    return SinrSample(
        eta=signal / denom if denom > 0.0 else math.inf,
        signal=signal,
        interference=interference,
    )


def coverage_given_positions(
    r,
    r_i,
    d_i,
    epsilon: float,
    alpha: float,
    R: float,
    sigma2: float,
    T_linear: float,
    normalized: bool = True,
):
    """P[SINR > T] with all positions fixed, averaged exactly over fading.

    For unit-mean exponential gains, P[g > T*(sigma^2 + I)/S] factorizes into
    exp(-T*sigma^2/S) * prod_i 1/(1 + T*w_i/S) with S the tagged signal
    coefficient and w_i the interference weights. Vectorized: r may be scalar
    or (n,), r_i/d_i may be (k,) or (n, k).
    """
    s = signal_coefficient(r, epsilon, alpha, R, normalized)
    w = interference_weights(r_i, d_i, epsilon, alpha, R, normalized)
    ts = T_linear / np.asarray(s, dtype=float)
    if w.ndim == 2:
        factors = 1.0 / (1.0 + ts[..., None] * w)
    else:
        factors = 1.0 / (1.0 + ts * w)
    out = np.exp(-ts * sigma2) * np.prod(factors, axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def conditional_coverage(
    drop: UserDrop,
    epsilon: float,
    alpha: float,
    R: float,
    noise: NoiseModel,
    T_linear: float,
    normalized: bool = True,
) -> float:
    """Closed-form coverage probability of one drop (fading averaged out)."""
    return float(
        coverage_given_positions(
            drop.r, drop.r_i, drop.d_i, epsilon, alpha, R,
            noise.sigma2_norm, T_linear, normalized,
        )
    )


def coverage_fading_mc(
    drop: UserDrop,
    epsilon: float,
    alpha: float,
    R: float,
    noise: NoiseModel,
    T_linear: float,
    n_draws: int,
    rng: np.random.Generator,
    normalized: bool = True,
) -> tuple[float, float]:
    """Brute-force indicator estimate of the same conditional coverage.

    Independent check on the closed form: draws explicit fading and counts
    SINR > T. Returns (estimate, binomial stderr).
    """
    s = signal_coefficient(drop.r, epsilon, alpha, R, normalized)
    w = interference_weights(drop.r_i, drop.d_i, epsilon, alpha, R, normalized)
    g = unit_exponential(rng, size=n_draws)
    h = unit_exponential(rng, size=(n_draws, len(w)))
    eta = g * s / (noise.sigma2_norm + h @ w)
    p = float(np.mean(eta > T_linear))
    return p, math.sqrt(p * (1.0 - p) / n_draws)
