"""Coverage estimation: micro-oracle, determinism, intervals, availability mixing."""

import math

import numpy as np
import pytest

from tuavsim.channel import ORTHOGONAL, SPEED_OF_LIGHT, ChannelParams, mean_rx_power_dbm
from tuavsim.coverage import (
    CoverageEstimate,
    coverage_given_uav,
    coverage_mbs_only,
    coverage_with_availability,
    wilson_interval,
)
from tuavsim.deployment import Scenario, UntetheredMode, UserCluster, sample_users
from tuavsim.geometry import Point3

UAV = Point3(0.0, 0.0, 100.0)


def make_scenario(center=(0.0, 0.0), radius=100.0, mbs=(160.0, 0.0, 30.0), **channel_kwargs):
    cluster = UserCluster(center=Point3(center[0], center[1], 1.5), radius=radius, user_height=1.5)
    return Scenario(
        cluster=cluster,
        mbs_position=Point3(*mbs),
        uav_mode=UntetheredMode(0.8),
        channel=ChannelParams(**channel_kwargs),
    )


# --- Wilson interval ----------------------------------------------------------

def test_wilson_brackets_the_point_estimate():
    for k, n in ((0, 50), (1, 50), (25, 50), (49, 50), (50, 50), (937, 1000)):
        lo, hi = wilson_interval(k, n)
        assert 0.0 <= lo <= k / n <= hi <= 1.0


def test_wilson_degenerate_endpoints():
    lo, hi = wilson_interval(0, 100)
    assert lo == 0.0 and hi > 0.0
    lo, hi = wilson_interval(100, 100)
    assert hi == pytest.approx(1.0) and lo < 1.0


def test_wilson_narrows_with_samples():
    w1 = np.subtract(*wilson_interval(80, 100)[::-1])
    w2 = np.subtract(*wilson_interval(8000, 10000)[::-1])
    assert w2 < w1


# --- micro-oracle: three fixed users, fading disabled, LoS forced ---------------

def _fspl_db(d, f):
    return 20.0 * math.log10(4.0 * math.pi * d * f / SPEED_OF_LIGHT)


def test_three_user_micro_instance_matches_hand_evaluation():
    """Brute-force oracle: with fading pinned at 1 (huge Nakagami order) and LoS
    forced (tiny sigmoid coefficient), each user's SNR is a closed-form number;
    the simulated coverage must equal the hand-computed indicator."""
    f, noise, thr, p_uav = 28e9, -90.0, 10.0, 30.0
    users_xy = [(0.0, 0.0), (200.0, 0.0), (400.0, 0.0)]
    expected = []
    for ux, uy in users_xy:
        d = math.sqrt(ux**2 + uy**2 + (100.0 - 1.5) ** 2)
        snr = p_uav - (_fspl_db(d, f) + 1.0) - noise
        expected.append(1.0 if snr >= thr else 0.0)
    assert expected == [1.0, 1.0, 0.0]  # margins +7.8, +0.65, -4.7 dB

    got = []
    for ux, uy in users_xy:
        scenario = make_scenario(
            center=(ux, uy),
            radius=1e-9,
            mbs=(5000.0, 0.0, 30.0),  # far enough that the UAV always serves
            a_los=1e-12,
            m_los=1e8,
            m_nlos=1e8,
            carrier_hz=f,
            noise_dbm=noise,
            sinr_threshold_db=thr,
            tx_power_uav_dbm=p_uav,
            interference_mode=ORTHOGONAL,
        )
        got.append(coverage_given_uav(scenario, UAV, 64, seed=1).p_cov)
    assert got == expected


def test_unbounded_snr_gives_full_coverage():
    scenario = make_scenario(noise_dbm=-math.inf, interference_mode=ORTHOGONAL)
    est = coverage_given_uav(scenario, UAV, 2000, seed=2)
    assert est.p_cov == 1.0


def test_infinite_threshold_gives_zero_coverage():
    scenario = make_scenario(sinr_threshold_db=math.inf)
    est = coverage_given_uav(scenario, UAV, 2000, seed=3)
    assert est.p_cov == 0.0
    est2 = coverage_mbs_only(scenario, 2000, seed=3)
    assert est2.p_cov == 0.0


def test_mbs_only_equals_uav_run_with_silent_uav():
    # A UAV with -inf transmit power never wins association and never covers.
    scenario = make_scenario(tx_power_uav_dbm=-math.inf)
    with_dead_uav = coverage_given_uav(scenario, UAV, 30_000, seed=4)
    alone = coverage_mbs_only(scenario, 30_000, seed=4)
    # Same seed but different draw layouts: agreement is statistical.
    assert with_dead_uav.p_cov == pytest.approx(alone.p_cov, abs=0.02)


# --- determinism and worker invariance -----------------------------------------

def test_estimate_deterministic_across_runs():
    scenario = make_scenario()
    a = coverage_given_uav(scenario, UAV, 25_000, seed=7)
    b = coverage_given_uav(scenario, UAV, 25_000, seed=7)
    assert a == b


def test_estimate_invariant_to_worker_count():
    scenario = make_scenario()
    one = coverage_given_uav(scenario, UAV, 35_000, seed=8, workers=1)
    many = coverage_given_uav(scenario, UAV, 35_000, seed=8, workers=4)
    assert one.p_cov == many.p_cov
    only_one = coverage_mbs_only(scenario, 35_000, seed=8, workers=1)
    only_many = coverage_mbs_only(scenario, 35_000, seed=8, workers=4)
    assert only_one.p_cov == only_many.p_cov


def test_mbs_coverage_non_increasing_in_distance_paired_seeds():
    prev = None
    for d in (100.0, 200.0, 400.0):
        scenario = make_scenario(mbs=(d, 0.0, 30.0))
        p = coverage_mbs_only(scenario, 20_000, seed=9).p_cov
        if prev is not None:
            assert p <= prev + 0.01  # common random numbers, CI-level slack
        prev = p


def test_validates_uav_above_users():
    scenario = make_scenario()
    with pytest.raises(ValueError):
        coverage_given_uav(scenario, Point3(0, 0, 1.0), 100, seed=0)


def test_estimate_invariants():
    scenario = make_scenario()
    est = coverage_given_uav(scenario, UAV, 5000, seed=10)
    assert 0.0 <= est.ci_low <= est.p_cov <= est.ci_high <= 1.0
    assert est.n_samples == 5000 and est.seed == 10
    with pytest.raises(ValueError):
        CoverageEstimate(p_cov=0.5, n_samples=10, ci_low=0.6, ci_high=0.9, seed=0)


# --- availability mixture -------------------------------------------------------

def _est(p):
    return CoverageEstimate(p_cov=p, n_samples=1000, ci_low=max(0.0, p - 0.01),
                            ci_high=min(1.0, p + 0.01), seed=0)


def test_mixture_endpoints():
    assert coverage_with_availability(_est(0.9), _est(0.3), 1.0) == 0.9
    assert coverage_with_availability(_est(0.9), _est(0.3), 0.0) == 0.3


def test_mixture_midpoint():
    assert coverage_with_availability(_est(0.9), _est(0.3), 0.5) == pytest.approx(0.6)


def test_mixture_affine_exact_in_floating_point():
    # Halving commutes with IEEE rounding, so collinearity at {0, 1/2, 1} is exact.
    p, q = _est(0.8371929), _est(0.3153077)
    mid = coverage_with_availability(p, q, 0.5)
    ends = 0.5 * (
        coverage_with_availability(p, q, 1.0) + coverage_with_availability(p, q, 0.0)
    )
    assert mid == ends


def test_mixture_monotone_when_present_dominates():
    p, q = _est(0.9), _est(0.4)
    vals = [coverage_with_availability(p, q, a) for a in np.linspace(0, 1, 11)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_mixture_validates_availability():
    with pytest.raises(ValueError):
        coverage_with_availability(_est(0.9), _est(0.3), 1.2)


# --- association sanity ----------------------------------------------------------

def test_majority_associates_to_overhead_uav_when_mbs_far():
    scenario = make_scenario(mbs=(1500.0, 0.0, 30.0))
    users = sample_users(scenario.cluster, 1000, np.random.default_rng(11))
    ch = scenario.channel
    uav_pos = Point3(0.0, 0.0, 100.0)
    to_uav = sum(
        mean_rx_power_dbm(ch, uav_pos, u, ch.tx_power_uav_dbm)
        >= mean_rx_power_dbm(ch, scenario.mbs_position, u, ch.tx_power_mbs_dbm)
        for u in users
    )
    assert to_uav / len(users) >= 0.5
