"""Monte-Carlo estimation of user coverage probability.

Samples are processed in fixed-size batches; batch ``b`` of a run seeded with
``seed`` always uses the generator derived from ``(seed, b)`` and batch counts
are reduced in batch order, so estimates are bit-identical no matter how many
workers execute the batches. Calling two estimators with the same seed yields
common random numbers: identical user positions and channel draws, which makes
argmax selections and paired comparisons noise-consistent.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .channel import CO_CHANNEL, SPEED_OF_LIGHT, ChannelParams
from .deployment import Scenario, UserCluster
from .geometry import Point3

BATCH_SIZE = 10_000

_Z95 = 1.959963984540054


@dataclass(frozen=True)
class CoverageEstimate:
    """Coverage probability with its sample count and 95% Wilson interval."""

    p_cov: float
    n_samples: int
    ci_low: float
    ci_high: float
    seed: int

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be at least 1, got {self.n_samples}")
        if not 0.0 <= self.ci_low <= self.p_cov <= self.ci_high <= 1.0:
            raise ValueError(
                f"need 0 <= ci_low <= p_cov <= ci_high <= 1, got "
                f"({self.ci_low}, {self.p_cov}, {self.ci_high})"
            )


def wilson_interval(successes: float, n: int, z: float = _Z95) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    p = successes / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2.0 * n)) / denom
    half = z * math.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom
    # The score interval always contains the point estimate; the clamps only
    # absorb float rounding at the p = 0 and p = 1 endpoints.
    return min(p, max(0.0, center - half)), max(p, min(1.0, center + half))


def batch_rng(seed: int, batch_index: int) -> np.random.Generator:
    """Generator for one sample batch, derived from (seed, batch index)."""
    return np.random.default_rng(np.random.SeedSequence([seed, batch_index]))


def _user_draw(cluster: UserCluster, rng: np.random.Generator, n: int):
    r = cluster.radius * np.sqrt(rng.random(n))
    phi = 2.0 * np.pi * rng.random(n)
    return cluster.center.x + r * np.cos(phi), cluster.center.y + r * np.sin(phi)


def _link_geometry(ch: ChannelParams, tx: Point3, ux, uy, uz: float):
    """Vectorized per-user link quantities: distance, LoS probability, FSPL."""
    dx = ux - tx.x
    dy = uy - tx.y
    dz = tx.z - uz
    d = np.sqrt(dx * dx + dy * dy + dz * dz)
    elev_deg = np.degrees(np.arcsin(np.clip(dz / d, -1.0, 1.0)))
    p_los = 1.0 / (1.0 + ch.a_los * np.exp(-ch.b_los * (elev_deg - ch.a_los)))
    np.clip(p_los, 0.0, 1.0, out=p_los)
    fspl = 20.0 * np.log10(4.0 * np.pi * d * ch.carrier_hz / SPEED_OF_LIGHT)
    return d, p_los, fspl


def _mean_rx_dbm(ch: ChannelParams, tx_power_dbm: float, p_los, fspl):
    """LoS-averaged mean received power (fading excluded), the association metric."""
    g = p_los * 10.0 ** (-(fspl + ch.eta_los_db) / 10.0) + (1.0 - p_los) * 10.0 ** (
        -(fspl + ch.eta_nlos_db) / 10.0
    )
    return tx_power_dbm + 10.0 * np.log10(g)


def _realized_rx_dbm(ch: ChannelParams, tx_power_dbm: float, fspl, p_los, rng, n: int):
    """Draw LoS states and fading, return realized received power in dBm.

    Draw order per batch is fixed (one uniform for the LoS state, then one
    gamma variate per fading order) so that equal seeds give common random
    numbers across transmitter positions.
    """
    los = rng.random(n) < p_los
    gain_los = rng.gamma(ch.m_los, 1.0 / ch.m_los, n)
    gain_nlos = rng.gamma(ch.m_nlos, 1.0 / ch.m_nlos, n)
    eta = np.where(los, ch.eta_los_db, ch.eta_nlos_db)
    gain = np.where(los, gain_los, gain_nlos)
    return tx_power_dbm - (fspl + eta) + 10.0 * np.log10(gain)


def _success_db(ch: ChannelParams, serving_dbm, interferer_dbm) -> np.ndarray:
    """Coverage indicator per sample given serving/interfering rx powers."""
    if ch.interference_mode == CO_CHANNEL and interferer_dbm is not None:
        with np.errstate(divide="ignore"):
            s = 10.0 ** (serving_dbm / 10.0)
            denom = 10.0 ** (ch.noise_dbm / 10.0) + 10.0 ** (interferer_dbm / 10.0)
            sinr = 10.0 * np.log10(s / denom)
    else:
        sinr = serving_dbm - ch.noise_dbm
    return sinr >= ch.sinr_threshold_db


def _batch_with_uav(scenario: Scenario, uav: Point3, rng: np.random.Generator, n: int) -> int:
    ch = scenario.channel
    uz = scenario.cluster.user_height
    ux, uy = _user_draw(scenario.cluster, rng, n)
    _, p_los_u, fspl_u = _link_geometry(ch, uav, ux, uy, uz)
    _, p_los_m, fspl_m = _link_geometry(ch, scenario.mbs_position, ux, uy, uz)
    rx_u = _realized_rx_dbm(ch, ch.tx_power_uav_dbm, fspl_u, p_los_u, rng, n)
    rx_m = _realized_rx_dbm(ch, ch.tx_power_mbs_dbm, fspl_m, p_los_m, rng, n)
    mean_u = _mean_rx_dbm(ch, ch.tx_power_uav_dbm, p_los_u, fspl_u)
    mean_m = _mean_rx_dbm(ch, ch.tx_power_mbs_dbm, p_los_m, fspl_m)
    to_uav = mean_u >= mean_m
    serving = np.where(to_uav, rx_u, rx_m)
    interferer = np.where(to_uav, rx_m, rx_u)
    return int(_success_db(ch, serving, interferer).sum())


def _batch_mbs_only(scenario: Scenario, rng: np.random.Generator, n: int) -> int:
    ch = scenario.channel
    ux, uy = _user_draw(scenario.cluster, rng, n)
    _, p_los_m, fspl_m = _link_geometry(ch, scenario.mbs_position, ux, uy, scenario.cluster.user_height)
    rx_m = _realized_rx_dbm(ch, ch.tx_power_mbs_dbm, fspl_m, p_los_m, rng, n)
    return int(_success_db(ch, rx_m, None).sum())


def _batch_sizes(n_samples: int) -> list[int]:
    full, rem = divmod(n_samples, BATCH_SIZE)
    return [BATCH_SIZE] * full + ([rem] if rem else [])


def _run_batches(
    batch_fn: Callable[[np.random.Generator, int], int],
    n_samples: int,
    seed: int,
    workers: int,
) -> int:
    sizes = _batch_sizes(n_samples)

    def one(args) -> int:
        b, size = args
        return batch_fn(batch_rng(seed, b), size)

    if workers <= 1 or len(sizes) <= 1:
        return sum(one(x) for x in enumerate(sizes))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(one, enumerate(sizes)))


def coverage_counts_given_uav(
    scenario: Scenario, uav_position: Point3, n_samples: int, seed: int, workers: int = 1
) -> int:
    """Raw success count behind :func:`coverage_given_uav` (used for pooling)."""
    if n_samples < 1:
        raise ValueError(f"n_samples must be at least 1, got {n_samples}")
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    if not uav_position.z > scenario.cluster.user_height:
        raise ValueError(
            f"UAV altitude {uav_position.z} must exceed user height "
            f"{scenario.cluster.user_height}"
        )
    return _run_batches(
        lambda rng, n: _batch_with_uav(scenario, uav_position, rng, n), n_samples, seed, workers
    )


def coverage_counts_mbs_only(
    scenario: Scenario, n_samples: int, seed: int, workers: int = 1
) -> int:
    """Raw success count behind :func:`coverage_mbs_only`."""
    if n_samples < 1:
        raise ValueError(f"n_samples must be at least 1, got {n_samples}")
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    return _run_batches(lambda rng, n: _batch_mbs_only(scenario, rng, n), n_samples, seed, workers)


def estimate_from_counts(successes: float, n_samples: int, seed: int) -> CoverageEstimate:
    lo, hi = wilson_interval(successes, n_samples)
    return CoverageEstimate(
        p_cov=successes / n_samples, n_samples=n_samples, ci_low=lo, ci_high=hi, seed=seed
    )


def coverage_given_uav(
    scenario: Scenario, uav_position: Point3, n_samples: int, seed: int, workers: int = 1
) -> CoverageEstimate:
    """Coverage probability with the UAV present.

    Per sample: draw one user on the cluster disk, realize its links to the
    UAV and the macro station, associate it to the transmitter with the higher
    LoS-averaged mean received power, and count success when the serving SINR
    (the non-serving transmitter interferes under co-channel operation) meets
    the threshold.
    """
    k = coverage_counts_given_uav(scenario, uav_position, n_samples, seed, workers)
    return estimate_from_counts(k, n_samples, seed)


def coverage_mbs_only(
    scenario: Scenario, n_samples: int, seed: int, workers: int = 1
) -> CoverageEstimate:
    """Coverage probability with the macro station as sole transmitter."""
    k = coverage_counts_mbs_only(scenario, n_samples, seed, workers)
    return estimate_from_counts(k, n_samples, seed)


def coverage_with_availability(
    p_present: CoverageEstimate, p_absent: CoverageEstimate, availability: float
) -> float:
    """Time-fraction mixture of UAV-present and UAV-absent coverage."""
    if not 0.0 <= availability <= 1.0:
        raise ValueError(f"availability must lie in [0, 1], got {availability}")
    return availability * p_present.p_cov + (1.0 - availability) * p_absent.p_cov
