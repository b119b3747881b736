"""Air/ground-to-user link model: LoS probability, path loss, fading, and SINR."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import DegenerateLinkError, Point3, elevation_angle

SPEED_OF_LIGHT = 299792458.0

CO_CHANNEL = "co_channel"
ORTHOGONAL = "orthogonal"


class InvalidElevationError(ValueError):
    """Raised when an elevation angle falls outside [0, pi/2]."""


@dataclass(frozen=True)
class ChannelParams:
    """Everything needed to map link geometry to received power and SINR.

    The LoS probability follows the elevation-angle sigmoid common to
    air-to-ground placement studies, with urban coefficients ``a_los`` and
    ``b_los``. Path loss is free-space at ``carrier_hz`` plus a per-state
    excess, and small-scale fading is Nakagami-m via unit-mean gamma power
    gains. Defaults model a 28 GHz hotspot layer: the aerial cell offloads
    the macro station on an orthogonal carrier, so coverage is noise limited
    unless ``interference_mode`` is set to co-channel.
    """

    a_los: float = 9.61
    b_los: float = 0.16
    eta_los_db: float = 1.0
    eta_nlos_db: float = 20.0
    carrier_hz: float = 28e9
    m_los: float = 3.0
    m_nlos: float = 1.0
    tx_power_uav_dbm: float = 30.0
    tx_power_mbs_dbm: float = 35.0
    noise_dbm: float = -90.0
    sinr_threshold_db: float = 10.0
    interference_mode: str = ORTHOGONAL

    def __post_init__(self):
        if not self.b_los > 0:
            raise ValueError(f"b_los must be positive, got {self.b_los}")
        if not 0.0 <= self.eta_los_db <= self.eta_nlos_db:
            raise ValueError(
                f"need 0 <= eta_los_db <= eta_nlos_db, got {self.eta_los_db}, {self.eta_nlos_db}"
            )
        if not self.carrier_hz > 0:
            raise ValueError(f"carrier_hz must be positive, got {self.carrier_hz}")
        if self.m_los < 0.5 or self.m_nlos < 0.5:
            raise ValueError(f"fading orders must be >= 0.5, got {self.m_los}, {self.m_nlos}")
        if self.interference_mode not in (CO_CHANNEL, ORTHOGONAL):
            raise ValueError(f"unknown interference_mode {self.interference_mode!r}")


@dataclass(frozen=True)
class LinkSample:
    """One realized link draw: LoS state, unit-mean fading power gain, rx power."""

    los: bool
    fading_gain: float
    rx_power_dbm: float

    def __post_init__(self):
        if not self.fading_gain > 0:
            raise ValueError(f"fading_gain must be positive, got {self.fading_gain}")


def dbm_to_mw(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0)


def mw_to_dbm(mw: float) -> float:
    if mw == 0.0:
        return -math.inf
    return 10.0 * math.log10(mw)


def los_probability(params: ChannelParams, elevation: float) -> float:
    """LoS probability of a link at ``elevation`` radians above horizontal.

    Sigmoid in the elevation angle (degrees), non-decreasing, clamped to [0, 1].
    """
    if elevation < 0.0 or elevation > math.pi / 2 + 1e-12:
        raise InvalidElevationError(f"elevation must lie in [0, pi/2], got {elevation}")
    deg = math.degrees(elevation)
    p = 1.0 / (1.0 + params.a_los * math.exp(-params.b_los * (deg - params.a_los)))
    return min(1.0, max(0.0, p))


def path_loss_db(params: ChannelParams, distance: float, los: bool) -> float:
    """Free-space path loss at the carrier frequency plus the LoS/NLoS excess."""
    if distance <= 0.0:
        raise DegenerateLinkError(f"distance must be positive, got {distance}")
    fspl = 20.0 * math.log10(4.0 * math.pi * distance * params.carrier_hz / SPEED_OF_LIGHT)
    return fspl + (params.eta_los_db if los else params.eta_nlos_db)


def mean_rx_power_dbm(params: ChannelParams, tx: Point3, rx: Point3, tx_power_dbm: float) -> float:
    """LoS-averaged mean received power in dBm, fading excluded.

    This is the quantity cell association compares: the linear path gain is
    p_los * g_los + (1 - p_los) * g_nlos.
    """
    p = los_probability(params, elevation_angle(tx, rx))
    d = tx.distance_to(rx)
    g = p * dbm_to_mw(-path_loss_db(params, d, True)) + (1.0 - p) * dbm_to_mw(
        -path_loss_db(params, d, False)
    )
    return tx_power_dbm + mw_to_dbm(g)


def sample_link(
    params: ChannelParams,
    tx: Point3,
    rx: Point3,
    tx_power_dbm: float,
    rng: np.random.Generator,
) -> LinkSample:
    """Draw one link realization: LoS state, then a unit-mean gamma fading gain
    with shape m_los or m_nlos, then the received power. Deterministic given
    the generator state."""
    p = los_probability(params, elevation_angle(tx, rx))
    los = bool(rng.random() < p)
    m = params.m_los if los else params.m_nlos
    gain = float(rng.gamma(m, 1.0 / m))
    d = tx.distance_to(rx)
    rx_power = tx_power_dbm - path_loss_db(params, d, los) + 10.0 * math.log10(gain)
    return LinkSample(los=los, fading_gain=gain, rx_power_dbm=rx_power)


def sinr_db(serving: LinkSample, interferers: list[LinkSample], params: ChannelParams) -> float:
    """SINR of the serving link in dB.

    Interference is summed in linear milliwatts under co-channel operation and
    is zero under orthogonal operation (pure SNR).
    """
    s = dbm_to_mw(serving.rx_power_dbm)
    denom = dbm_to_mw(params.noise_dbm)
    if params.interference_mode == CO_CHANNEL:
        denom += sum(dbm_to_mw(i.rx_power_dbm) for i in interferers)
    if s == 0.0:
        return -math.inf
    if denom == 0.0:
        return math.inf
    return 10.0 * math.log10(s / denom)
