"""Spatial primitives: ENU points, elevation angles, and the tether-limited hovering region."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class DegenerateLinkError(ValueError):
    """Raised when a link's endpoints coincide and no direction is defined."""


# Closed-boundary membership slack, just large enough to absorb float rounding
# when grid points are reconstructed from spherical coordinates.
_DIST_EPS = 1e-9
_ANGLE_EPS = 1e-12


@dataclass(frozen=True)
class Point3:
    """Position in meters in a fixed local East-North-Up frame (z = height above ground)."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)):
            raise ValueError(f"coordinates must be finite, got ({self.x}, {self.y}, {self.z})")

    def distance_to(self, other: Point3) -> float:
        return math.dist((self.x, self.y, self.z), (other.x, other.y, other.z))

    def horizontal_distance_to(self, other: Point3) -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class HoveringRegion:
    """Positions reachable by a tethered UAV anchored at a ground station.

    The region is the closed upper half-ball of radius ``tether_max`` around
    ``anchor``, cut down to the cone of inclinations at least ``incl_min``
    above the anchor's horizontal plane (a conservative stand-in for clearance
    over surrounding obstacles) and to altitudes of at least ``alt_min``.
    """

    anchor: Point3
    tether_max: float
    incl_min: float = math.radians(10.0)
    alt_min: float = 0.0

    def __post_init__(self):
        if not self.tether_max > 0:
            raise ValueError(f"tether_max must be positive, got {self.tether_max}")
        if not 0.0 <= self.incl_min <= math.pi / 2:
            raise ValueError(f"incl_min must lie in [0, pi/2], got {self.incl_min}")
        if self.anchor.z < 0:
            raise ValueError(f"anchor may not be below ground, got z={self.anchor.z}")


def elevation_angle(tx: Point3, rx: Point3) -> float:
    """Elevation of ``tx`` seen from ``rx`` in radians, in [-pi/2, pi/2].

    Positive when the transmitter is above the receiver; antisymmetric in the
    sign of the height difference.
    """
    d = tx.distance_to(rx)
    if d == 0.0:
        raise DegenerateLinkError(f"coincident endpoints {tx}")
    s = (tx.z - rx.z) / d
    # |s| can exceed 1 by one ulp for near-vertical links.
    return math.asin(max(-1.0, min(1.0, s)))


def region_contains(region: HoveringRegion, p: Point3) -> bool:
    """Whether ``p`` lies in the hovering region. All boundaries are closed."""
    d = p.distance_to(region.anchor)
    if d > region.tether_max + _DIST_EPS:
        return False
    if p.z < max(region.anchor.z, region.alt_min) - _DIST_EPS:
        return False
    if d == 0.0:
        # Sitting on the anchor: a zero-length tether has no inclination.
        return True
    return elevation_angle(p, region.anchor) >= region.incl_min - _ANGLE_EPS


def region_grid(region: HoveringRegion, n_incl: int, n_azim: int, n_rad: int) -> list[Point3]:
    """Deterministic spherical grid over the hovering region.

    Inclinations are evenly spaced over [incl_min, pi/2], azimuths over
    [0, 2*pi), and tether radii over (0, tether_max]. The zenith direction is
    emitted once per radius no matter how many azimuths are requested, and the
    output is ordered by (radius index, inclination index, azimuth index).
    Every returned point satisfies :func:`region_contains`.
    """
    return [p for p, _ in grid_with_spherical(region, n_incl, n_azim, n_rad)]


def grid_with_spherical(
    region: HoveringRegion, n_incl: int, n_azim: int, n_rad: int
) -> list[tuple[Point3, tuple[float, float, float]]]:
    """Like :func:`region_grid` but pairing each point with its (radius,
    inclination, azimuth) coordinates, which local refinement searches need."""
    if min(n_incl, n_azim, n_rad) < 1:
        raise ValueError("grid counts must all be at least 1")
    incls = np.linspace(region.incl_min, math.pi / 2, n_incl)
    azims = np.arange(n_azim) * (2.0 * math.pi / n_azim)
    radii = region.tether_max * np.arange(1, n_rad + 1) / n_rad
    a = region.anchor
    out: list[tuple[Point3, tuple[float, float, float]]] = []
    for r in radii:
        r = float(r)
        zenith_emitted = False
        for th in incls:
            th = float(th)
            if th >= math.pi / 2 - 1e-12:
                if not zenith_emitted:
                    p = Point3(a.x, a.y, a.z + r)
                    if region_contains(region, p):
                        out.append((p, (r, math.pi / 2, 0.0)))
                    zenith_emitted = True
                continue
            for ph in azims:
                ph = float(ph)
                p = point_in_region(region, r, th, ph)
                if region_contains(region, p):
                    out.append((p, (r, th, ph)))
    return out


def point_in_region(region: HoveringRegion, radius: float, incl: float, azim: float) -> Point3:
    """Point at tether extension ``radius`` and direction (``incl``, ``azim``)
    from the anchor. Not necessarily inside the region (check separately)."""
    a = region.anchor
    return Point3(
        a.x + radius * math.cos(incl) * math.cos(azim),
        a.y + radius * math.cos(incl) * math.sin(azim),
        a.z + radius * math.sin(incl),
    )
