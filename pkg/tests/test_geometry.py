"""Geometry: elevation angles, hovering-region membership, and the search grid."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tuavsim.geometry import (
    DegenerateLinkError,
    HoveringRegion,
    Point3,
    elevation_angle,
    region_contains,
    region_grid,
)

ANCHOR = Point3(0.0, 0.0, 30.0)


def region(tether=120.0, incl_min=0.0, alt_min=0.0, anchor=ANCHOR):
    return HoveringRegion(anchor=anchor, tether_max=tether, incl_min=incl_min, alt_min=alt_min)


# --- elevation_angle -------------------------------------------------------

def test_elevation_vertical_link():
    assert elevation_angle(Point3(0, 0, 100), Point3(0, 0, 0)) == pytest.approx(math.pi / 2)


def test_elevation_45_degrees():
    assert elevation_angle(Point3(100, 0, 100), Point3(0, 0, 0)) == pytest.approx(math.pi / 4)


def test_elevation_co_altitude():
    assert elevation_angle(Point3(30, 40, 1.5), Point3(0, 0, 1.5)) == 0.0


def test_elevation_coincident_points_raise():
    with pytest.raises(DegenerateLinkError):
        elevation_angle(Point3(1, 2, 3), Point3(1, 2, 3))


@given(
    st.floats(-500, 500), st.floats(-500, 500), st.floats(-500, 500),
    st.floats(-500, 500), st.floats(-500, 500), st.floats(-500, 500),
)
def test_elevation_antisymmetric_in_height_difference(x1, y1, z1, x2, y2, z2):
    tx, rx = Point3(x1, y1, z1), Point3(x2, y2, z2)
    if tx.distance_to(rx) == 0.0:
        return
    swapped = Point3(x1, y1, z2), Point3(x2, y2, z1)
    if swapped[0].distance_to(swapped[1]) == 0.0:
        return
    a = elevation_angle(tx, rx)
    b = elevation_angle(*swapped)
    assert a == pytest.approx(-b, abs=1e-12)
    assert -math.pi / 2 <= a <= math.pi / 2


def test_point_requires_finite_coordinates():
    with pytest.raises(ValueError):
        Point3(math.nan, 0, 0)
    with pytest.raises(ValueError):
        Point3(0, math.inf, 0)


# --- region_contains -------------------------------------------------------

def test_contains_tether_sphere_boundary_is_inside():
    assert region_contains(region(), Point3(0, 0, 150))  # distance exactly 120


def test_contains_rejects_beyond_tether():
    assert not region_contains(region(), Point3(121, 0, 30))


def test_contains_min_inclination_cone():
    # At 100 m horizontal range the 10 degree cone passes 100*tan(10deg) above
    # the anchor; 0.1 m above/below that height decides membership.
    reg = region(incl_min=math.radians(10.0))
    z_edge = 30.0 + 100.0 * math.tan(math.radians(10.0))
    assert region_contains(reg, Point3(100, 0, z_edge + 0.1))
    assert not region_contains(reg, Point3(100, 0, z_edge - 0.1))


def test_contains_respects_altitude_floor():
    reg = region(alt_min=200.0)
    assert not region_contains(reg, Point3(0, 0, 150))
    reg2 = region(alt_min=100.0)
    assert region_contains(reg2, Point3(0, 0, 150))


def test_contains_monotone_in_tether_length():
    rng = np.random.default_rng(7)
    for _ in range(300):
        anchor = Point3(*rng.uniform(-50, 50, 2), rng.uniform(0, 60))
        l1, l2 = sorted(rng.uniform(10, 200, 2))
        incl = rng.uniform(0, math.pi / 2 * 0.99)
        p = Point3(*rng.uniform(-250, 250, 2), rng.uniform(0, 250))
        small = HoveringRegion(anchor, l1, incl)
        large = HoveringRegion(anchor, l2, incl)
        if region_contains(small, p):
            assert region_contains(large, p)


def test_contains_antitone_in_min_inclination():
    rng = np.random.default_rng(8)
    for _ in range(300):
        anchor = Point3(*rng.uniform(-50, 50, 2), rng.uniform(0, 60))
        i1, i2 = sorted(rng.uniform(0, math.pi / 2 * 0.99, 2))
        p = Point3(*rng.uniform(-150, 150, 2), rng.uniform(0, 250))
        loose = HoveringRegion(anchor, 120.0, i1)
        tight = HoveringRegion(anchor, 120.0, i2)
        if region_contains(tight, p):
            assert region_contains(loose, p)


def test_unrestricted_region_is_upper_half_ball():
    reg = region(tether=100.0, incl_min=0.0, alt_min=0.0, anchor=Point3(5, -3, 40))
    rng = np.random.default_rng(9)
    pts = rng.uniform(-130, 130, size=(4000, 3))
    for dx, dy, dz in pts:
        p = Point3(5 + dx, -3 + dy, max(0.0, 40 + dz))
        inside_ball = p.distance_to(reg.anchor) <= 100.0 and p.z >= 40.0
        assert region_contains(reg, p) == inside_ball


# --- region_grid -----------------------------------------------------------

def test_grid_degenerate_single_point():
    reg = region(incl_min=math.pi / 2)
    pts = region_grid(reg, 1, 1, 1)
    assert pts == [Point3(0.0, 0.0, 150.0)]


def test_grid_horizontal_ring_plus_zenith():
    # Two inclinations {0, pi/2} and four azimuths: a square on the horizontal
    # circle of radius 120 at the anchor height, plus one zenith point.
    pts = region_grid(region(), 2, 4, 1)
    assert len(pts) == 5
    expected_ring = [(120.0, 0.0), (0.0, 120.0), (-120.0, 0.0), (0.0, -120.0)]
    for p, (ex, ey) in zip(pts[:4], expected_ring):
        assert p.x == pytest.approx(ex, abs=1e-9)
        assert p.y == pytest.approx(ey, abs=1e-9)
        assert p.z == pytest.approx(30.0, abs=1e-9)
    assert pts[4] == Point3(0.0, 0.0, 150.0)


def test_grid_points_all_contained():
    reg = region(tether=80.0, incl_min=math.radians(15.0), anchor=Point3(10, 20, 25))
    pts = region_grid(reg, 5, 7, 3)
    assert pts
    assert all(region_contains(reg, p) for p in pts)


def test_grid_zenith_emitted_once_per_radius():
    pts = region_grid(region(), 3, 16, 2)
    # Per radius: 2 non-zenith rings of 16 azimuths plus exactly one zenith.
    assert len(pts) == 2 * (2 * 16 + 1)
    zeniths = [p for p in pts if p.x == 0.0 and p.y == 0.0]
    assert zeniths == [Point3(0.0, 0.0, 90.0), Point3(0.0, 0.0, 150.0)]


def test_grid_duplicate_free_and_deterministic():
    reg = region(incl_min=math.radians(5.0))
    a = region_grid(reg, 6, 9, 4)
    b = region_grid(reg, 6, 9, 4)
    assert a == b
    assert len({(p.x, p.y, p.z) for p in a}) == len(a)


def test_grid_ordering_radius_major():
    reg = region()
    pts = region_grid(reg, 2, 3, 2)
    dists = [p.distance_to(reg.anchor) for p in pts]
    # Radius blocks appear in increasing order: 60-block before 120-block.
    assert dists == sorted(dists, key=lambda d: round(d, 6)) or all(
        round(d1, 6) <= round(d2, 6) for d1, d2 in zip(dists, dists[4:])
    )
    assert max(dists[:4]) == pytest.approx(60.0)
    assert min(dists[4:]) == pytest.approx(120.0)


def test_grid_rejects_zero_counts():
    with pytest.raises(ValueError):
        region_grid(region(), 0, 1, 1)


def test_region_validation():
    with pytest.raises(ValueError):
        HoveringRegion(ANCHOR, -1.0)
    with pytest.raises(ValueError):
        HoveringRegion(ANCHOR, 120.0, incl_min=-0.1)
    with pytest.raises(ValueError):
        HoveringRegion(Point3(0, 0, -5.0), 120.0)
