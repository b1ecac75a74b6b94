"""Two-tier hexagonal macrocell layout, reuse partitions, and position sampling.

Cells are modeled as disks of radius R around each base station: the distance
of a uniformly placed user to its BS then has density 2r/R^2 on (0, R], which
is the distance law the whole study is built on.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
import math

import numpy as np


class Reuse(str, Enum):
    """Frequency reuse mode: FR1 = all 18 neighbors co-channel, FR3 = 1-in-3."""

    FR1 = "FR1"
    FR3 = "FR3"

    @classmethod
    def parse(cls, value: str) -> "Reuse":
        try:
            return cls(value.strip().upper())
        except ValueError:
            raise ValueError(f"reuse must be FR1 or FR3, got {value!r}") from None


@dataclass(frozen=True)
class CellLayout:
    """19 base-station positions (index 0 at the origin) plus tier labels.

    bs_positions : (19, 2) array, meters
    axial_qr     : (19, 2) integer lattice coordinates of each site
    tier_of      : (19,) array with values in {0, 1, 2}
    site_distance_m : inter-site distance (2R)
    """

    bs_positions: np.ndarray
    axial_qr: np.ndarray
    tier_of: np.ndarray
    site_distance_m: float

    @property
    def cell_radius_m(self) -> float:
        return self.site_distance_m / 2.0

    def distances_from_origin(self) -> np.ndarray:
        return np.hypot(self.bs_positions[:, 0], self.bs_positions[:, 1])


def build_layout(R: float) -> CellLayout:
    """Triangular lattice with spacing 2R, two full tiers around the origin.

    Ordering is deterministic: by tier, then by polar angle of the site.
    """
    if R <= 0:
        raise ValueError("R must be positive")
    sites = []
    for q in range(-2, 3):
        for r in range(-2, 3):
            tier = (abs(q) + abs(r) + abs(q + r)) // 2  # hex distance to origin
            if tier > 2:
                continue
            x = R * (2 * q + r)
            y = R * math.sqrt(3) * r
            angle = math.atan2(y, x) % (2 * math.pi) if tier else 0.0
            sites.append((tier, angle, q, r, x, y))
    sites.sort(key=lambda s: (s[0], s[1]))
    positions = np.array([[s[4], s[5]] for s in sites])
    axial = np.array([[s[2], s[3]] for s in sites], dtype=int)
    tiers = np.array([s[0] for s in sites], dtype=int)
    return CellLayout(positions, axial, tiers, site_distance_m=2.0 * R)


def cochannel_set(layout: CellLayout, reuse: Reuse) -> np.ndarray:
    """Indices of the cells that share the tagged cell's band.

    FR1: all 18 neighbors. FR3: the 6 cells of the same color under the
    canonical 3-coloring of the triangular lattice (the nearest co-channel
    sublattice, at distance sqrt(3) * 2R from the origin).
    """
    reuse = Reuse(reuse)
    if reuse is Reuse.FR1:
        return np.arange(1, len(layout.bs_positions))
    q = layout.axial_qr[:, 0]
    r = layout.axial_qr[:, 1]
    same_color = (q - r) % 3 == 0
    same_color[0] = False  # the tagged cell itself never interferes
    return np.nonzero(same_color)[0]


def sample_radius(rng: np.random.Generator, R: float, size=None):
    """Draw user-to-BS distances with density 2r/R^2 via inverse transform.

    R * sqrt(u) with u uniform on (0, 1]; the 1 - random() form keeps the draw
    strictly positive and allows r = R.
    """
    if R <= 0:
        raise ValueError("R must be positive")
    return R * np.sqrt(1.0 - rng.random(size))


def sample_radius_band(rng: np.random.Generator, R: float, r_min: float, size=None):
    """Draw from the same density restricted to [r_min, R] (cell-edge band)."""
    if not 0 <= r_min < R:
        raise ValueError("need 0 <= r_min < R")
    u = 1.0 - rng.random(size)
    return np.sqrt(r_min**2 + u * (R**2 - r_min**2))


def sample_interferer_positions(
    layout: CellLayout,
    cochannel: np.ndarray,
    rng: np.random.Generator,
    n: int,
):
    """Drop one uplink user in each co-channel cell, n independent times.

    Each user sits at radius ~ 2r/R^2 and uniform angle around its own BS.
    Returns (r_i, d_i), both shaped (n, k): distance to the serving BS and
    distance to the origin BS.
    """
    centers = layout.bs_positions[np.asarray(cochannel, dtype=int)]
    k = len(centers)
    R = layout.cell_radius_m
    r_i = sample_radius(rng, R, size=(n, k))
    theta = rng.random((n, k)) * (2.0 * math.pi)
    x = centers[:, 0] + r_i * np.cos(theta)
    y = centers[:, 1] + r_i * np.sin(theta)
    return r_i, np.hypot(x, y)


@dataclass(frozen=True)
class UserDrop:
    """One geometric realization: tagged-user distance r plus interferer pairs.

    interferers is a (k, 2) array whose columns are (r_i, d_i).
    """

    r: float
    interferers: np.ndarray

    @property
    def r_i(self) -> np.ndarray:
        return self.interferers[:, 0]

    @property
    def d_i(self) -> np.ndarray:
        return self.interferers[:, 1]

    @property
    def n_interferers(self) -> int:
        return len(self.interferers)


def sample_drop(
    layout: CellLayout,
    cochannel: np.ndarray,
    rng: np.random.Generator,
    r_fixed: float | None = None,
) -> UserDrop:
    """One realization: tagged radius (given or drawn) plus one interferer per cell."""
    R = layout.cell_radius_m
    if r_fixed is not None:
        if not 0 < r_fixed <= R:
            raise ValueError(f"r_fixed must be in (0, {R}], got {r_fixed}")
        r = float(r_fixed)
    else:
        r = float(sample_radius(rng, R))
    r_i, d_i = sample_interferer_positions(layout, cochannel, rng, n=1)
    return UserDrop(r=r, interferers=np.column_stack([r_i[0], d_i[0]]))
