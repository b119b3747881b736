"""Optimal UAV positioning under common random numbers.

The tethered search runs an exhaustive spherical-grid pass over the hovering
region followed by a derivative-free pattern search in (inclination, azimuth,
radius); every candidate is scored on the same sample stream so the argmax is
noise-consistent. The untethered search is an altitude ladder at the cluster
center.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .coverage import coverage_given_uav
from .deployment import Scenario
from .geometry import (
    HoveringRegion,
    Point3,
    grid_with_spherical,
    point_in_region,
    region_contains,
)

_MIN_RADIUS_FRACTION = 1e-6
_MIN_STEP = 1e-4


@dataclass(frozen=True)
class PlacementResult:
    position: Point3
    objective: float
    evaluations: int

    def __post_init__(self):
        if not 0.0 <= self.objective <= 1.0:
            raise ValueError(f"objective must lie in [0, 1], got {self.objective}")


def optimize_tuav(
    scenario: Scenario,
    region: HoveringRegion,
    n_samples_per_eval: int,
    grid: tuple[int, int, int] = (10, 24, 4),
    master_seed: int = 0,
    refine_evals: int = 50,
    workers: int = 1,
) -> PlacementResult:
    """Best hovering position for the tethered UAV.

    Scores every grid candidate with common random numbers, keeps the first
    maximizer in grid order, then pattern-searches around it with halving
    steps (up to ``refine_evals`` extra evaluations), projecting iterates back
    into the region and accepting strict improvements only.
    """
    candidates = grid_with_spherical(region, *grid)
    if not candidates:
        raise ValueError("hovering region grid is empty; check alt_min against the anchor")

    def objective(p: Point3) -> float:
        return coverage_given_uav(scenario, p, n_samples_per_eval, master_seed, workers).p_cov

    best_point, best_sph = candidates[0]
    best_val = objective(best_point)
    evals = 1
    for point, sph in candidates[1:]:
        v = objective(point)
        evals += 1
        if v > best_val:
            best_point, best_sph, best_val = point, sph, v

    best_point, best_sph, best_val, used = _pattern_search(
        scenario, region, grid, best_point, best_sph, best_val, objective, refine_evals
    )
    evals += used

    assert region_contains(region, best_point)
    return PlacementResult(position=best_point, objective=best_val, evaluations=evals)


def _pattern_search(scenario, region, grid, best_point, best_sph, best_val, objective, budget):
    """Coordinate pattern search over (radius, inclination, azimuth)."""
    n_incl, n_azim, n_rad = grid
    incl_span = math.pi / 2 - region.incl_min
    step_incl = incl_span / max(n_incl - 1, 1) / 2.0 if incl_span > 0 else 0.0
    step_azim = math.pi / n_azim
    step_rad = region.tether_max / n_rad / 2.0
    r_min = region.tether_max * _MIN_RADIUS_FRACTION

    used = 0
    while used < budget and max(step_incl, step_azim, step_rad / region.tether_max) > _MIN_STEP:
        improved = False
        for axis, step in (("rad", step_rad), ("incl", step_incl), ("azim", step_azim)):
            if step <= 0.0:
                continue
            for sign in (1.0, -1.0):
                if used >= budget:
                    break
                r, th, ph = best_sph
                if axis == "rad":
                    r = min(max(r + sign * step, r_min), region.tether_max)
                elif axis == "incl":
                    th = min(max(th + sign * step, region.incl_min), math.pi / 2)
                else:
                    ph = (ph + sign * step) % (2.0 * math.pi)
                cand_sph = (r, th, ph)
                if cand_sph == best_sph:
                    continue
                cand = point_in_region(region, *cand_sph)
                if not region_contains(region, cand):
                    continue
                v = objective(cand)
                used += 1
                if v > best_val:
                    best_point, best_sph, best_val = cand, cand_sph, v
                    improved = True
        if not improved:
            step_incl /= 2.0
            step_azim /= 2.0
            step_rad /= 2.0
    return best_point, best_sph, best_val, used


def place_uuav(
    scenario: Scenario,
    altitudes: Sequence[float],
    n_samples_per_eval: int,
    master_seed: int = 0,
    workers: int = 1,
) -> PlacementResult:
    """Best altitude for the untethered UAV hovering over the cluster center.

    Candidates share one sample stream; ties go to the lowest altitude.
    """
    if not altitudes:
        raise ValueError("altitudes must be non-empty")
    uh = scenario.cluster.user_height
    if any(a <= uh for a in altitudes):
        raise ValueError(f"all altitudes must exceed the user height {uh}")
    cx, cy = scenario.cluster.center.x, scenario.cluster.center.y

    best_pos = None
    best_val = -1.0
    for alt in sorted(altitudes):
        p = Point3(cx, cy, float(alt))
        v = coverage_given_uav(scenario, p, n_samples_per_eval, master_seed, workers).p_cov
        if v > best_val:
            best_pos, best_val = p, v
    return PlacementResult(position=best_pos, objective=best_val, evaluations=len(altitudes))
