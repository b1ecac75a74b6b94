"""Rayleigh fading draws, path gain, and the fractional power-control law."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FadingDraw:
    """Unit-mean exponential power gains: g for the tagged link, h_i per interferer."""

    g: float
    h: np.ndarray


def unit_exponential(rng: np.random.Generator, size=None):
    """Exponential(1) via -ln(u); 1 - random() keeps u in (0, 1] so draws are finite."""
    return -np.log(1.0 - rng.random(size))


def sample_fading(rng: np.random.Generator, n_interferers: int) -> FadingDraw:
    if n_interferers < 0:
        raise ValueError("n_interferers must be nonnegative")
    g = float(unit_exponential(rng))
    h = unit_exponential(rng, size=n_interferers)
    return FadingDraw(g=g, h=np.atleast_1d(h))


def tx_power_norm(r, epsilon: float, alpha: float, R: float):
    """Transmit power as a fraction of the maximum: (r/R)^(alpha * epsilon).

    epsilon = 0 sends every user at full power; epsilon = 1 equalizes the
    power received at the BS, so only the cell-edge user is at the cap.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0) or np.any(r > R):
        raise ValueError(f"r must be in (0, R={R}]")
    out = (r / R) ** (alpha * epsilon)
    return float(out) if out.ndim == 0 else out


def path_gain(d, alpha: float):
    """Distance-power law d^(-alpha)."""
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0):
        raise ValueError("d must be positive")
    out = d ** (-alpha)
    return float(out) if out.ndim == 0 else out
