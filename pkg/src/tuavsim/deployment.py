"""Scenario entities and stochastic environment generation.

User clusters, the macro station, Poisson building fields with accessibility
marks, and ground-station placement on rooftops.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .channel import ChannelParams
from .geometry import HoveringRegion, Point3


class NoAccessibleRooftopError(RuntimeError):
    """Raised when a building field contains no accessible rooftop."""


@dataclass(frozen=True)
class UserCluster:
    """Disk of uniformly distributed ground users."""

    center: Point3
    radius: float
    user_height: float = 1.5

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class Building:
    x: float
    y: float
    height: float
    accessible: bool

    def __post_init__(self):
        if not self.height > 0:
            raise ValueError(f"height must be positive, got {self.height}")


@dataclass(frozen=True)
class Window:
    """Axis-aligned simulation window, meters."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self):
        if self.x_max <= self.x_min or self.y_max <= self.y_min:
            raise ValueError("window must have positive extent")

    @property
    def area_km2(self) -> float:
        return (self.x_max - self.x_min) * (self.y_max - self.y_min) / 1e6

    def contains(self, x: float, y: float) -> bool:
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max


@dataclass(frozen=True)
class BuildingField:
    window: Window
    density_per_km2: float
    buildings: tuple[Building, ...]

    def __post_init__(self):
        if not self.density_per_km2 > 0:
            raise ValueError(f"density must be positive, got {self.density_per_km2}")
        for b in self.buildings:
            if not self.window.contains(b.x, b.y):
                raise ValueError(f"building at ({b.x}, {b.y}) lies outside the window")


@dataclass(frozen=True)
class TetheredMode:
    region: HoveringRegion


@dataclass(frozen=True)
class UntetheredMode:
    availability: float

    def __post_init__(self):
        if not 0.0 <= self.availability <= 1.0:
            raise ValueError(f"availability must lie in [0, 1], got {self.availability}")


UavMode = Union[TetheredMode, UntetheredMode]


@dataclass(frozen=True)
class Scenario:
    """One simulation setup: user cluster, macro station, UAV mode, channel."""

    cluster: UserCluster
    mbs_position: Point3
    uav_mode: UavMode
    channel: ChannelParams

    def __post_init__(self):
        if not self.mbs_position.z > 0:
            raise ValueError(f"mbs_position.z must be positive, got {self.mbs_position.z}")


def sample_users(cluster: UserCluster, n: int, rng: np.random.Generator) -> list[Point3]:
    """n user positions, area-uniform on the cluster disk at user height."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    r = cluster.radius * np.sqrt(rng.random(n))
    phi = 2.0 * np.pi * rng.random(n)
    cx, cy = cluster.center.x, cluster.center.y
    return [
        Point3(float(cx + ri * np.cos(pi)), float(cy + ri * np.sin(pi)), cluster.user_height)
        for ri, pi in zip(r, phi)
    ]


def sample_marked_buildings(
    window: Window,
    density_per_km2: float,
    height_scale: float,
    rng: np.random.Generator,
    height_clip: tuple[float, float] = (5.0, 100.0),
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Raw Poisson building realization with per-building uniform marks.

    Returns (x, y, height, mark) arrays: the count is Poisson with mean
    density * area, locations i.i.d. uniform on the window, heights Rayleigh
    with scale ``height_scale`` clipped to ``height_clip``, and ``mark`` a
    uniform draw on [0, 1). Thresholding marks at increasing accessibility
    levels yields nested accessible sets, which keeps comparisons across
    accessibility values noise-consistent.
    """
    if not density_per_km2 > 0:
        raise ValueError(f"density must be positive, got {density_per_km2}")
    n = int(rng.poisson(density_per_km2 * window.area_km2))
    x = window.x_min + (window.x_max - window.x_min) * rng.random(n)
    y = window.y_min + (window.y_max - window.y_min) * rng.random(n)
    h = np.clip(rng.rayleigh(height_scale, n), height_clip[0], height_clip[1])
    marks = rng.random(n)
    return x, y, h, marks


def field_from_marks(
    window: Window,
    density_per_km2: float,
    x: np.ndarray,
    y: np.ndarray,
    h: np.ndarray,
    marks: np.ndarray,
    accessibility: float,
) -> BuildingField:
    """Build a field from a raw marked realization at one accessibility level."""
    buildings = tuple(
        Building(float(xi), float(yi), float(hi), bool(mi < accessibility))
        for xi, yi, hi, mi in zip(x, y, h, marks)
    )
    return BuildingField(window=window, density_per_km2=density_per_km2, buildings=buildings)


def generate_buildings(
    window: Window,
    density_per_km2: float,
    height_scale: float,
    accessibility: float,
    rng: np.random.Generator,
    height_clip: tuple[float, float] = (5.0, 100.0),
) -> BuildingField:
    """Poisson building field with independent Bernoulli accessibility flags."""
    if not 0.0 <= accessibility <= 1.0:
        raise ValueError(f"accessibility must lie in [0, 1], got {accessibility}")
    x, y, h, marks = sample_marked_buildings(window, density_per_km2, height_scale, rng, height_clip)
    return field_from_marks(window, density_per_km2, x, y, h, marks, accessibility)


def nearest_accessible_rooftop(field: BuildingField, target: tuple[float, float]) -> Building:
    """Accessible building closest (2D) to ``target``; ties break on (x, y)."""
    tx, ty = target
    best = None
    best_key = None
    for b in field.buildings:
        if not b.accessible:
            continue
        key = ((b.x - tx) ** 2 + (b.y - ty) ** 2, b.x, b.y)
        if best_key is None or key < best_key:
            best, best_key = b, key
    if best is None:
        raise NoAccessibleRooftopError("no accessible rooftop in the field")
    return best


def gs_from_building(building: Building, mast_height: float = 0.0) -> Point3:
    """Ground-station anchor on a rooftop (optionally on a short mast)."""
    return Point3(building.x, building.y, building.height + mast_height)


def dump_buildings_csv(field: BuildingField, path: str | Path) -> None:
    """Write the field as CSV with columns x_m, y_m, height_m, accessible."""
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["x_m", "y_m", "height_m", "accessible"])
        for b in field.buildings:
            writer.writerow([repr(b.x), repr(b.y), repr(b.height), int(b.accessible)])
