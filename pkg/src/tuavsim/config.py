"""Flat TOML experiment configuration with strict key validation.

Every physical quantity carries a unit suffix in its key name. Unknown keys
and type mismatches are hard errors. Keys omitted from the file fall back to
campaign-profile defaults (the accessibility campaign trades grid resolution
for its 200 building replications) and then to the global defaults below.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .channel import CO_CHANNEL, ORTHOGONAL, ChannelParams
from .deployment import UserCluster, Window
from .geometry import HoveringRegion, Point3

DISTANCE_SWEEP = "distance_sweep"
ACCESSIBILITY_SWEEP = "accessibility_sweep"

SCENARIO_UUAV = "uuav"
SCENARIO_TUAV_OPTIMAL = "tuav_optimal"
SCENARIO_TUAV_ABOVE_GS = "tuav_above_gs"
SCENARIO_MBS_ONLY = "mbs_only"

_SCENARIOS = (SCENARIO_UUAV, SCENARIO_TUAV_OPTIMAL, SCENARIO_TUAV_ABOVE_GS, SCENARIO_MBS_ONLY)


class ConfigError(ValueError):
    """Raised on unknown keys, missing keys, or invalid values."""


@dataclass(frozen=True)
class SimConfig:
    """Resolved experiment configuration (one flat key set)."""

    campaign: str = DISTANCE_SWEEP
    scenario: str = SCENARIO_TUAV_OPTIMAL
    seed: int = 1
    workers: int = 1
    # cluster and macro station
    cluster_radius_m: float = 100.0
    user_height_m: float = 1.5
    mbs_distance_m: float = 160.0
    mbs_height_m: float = 30.0
    # tether and hovering region
    tether_max_m: float = 120.0
    incl_min_deg: float = 10.0
    alt_min_m: float = 0.0
    gs_mast_m: float = 0.0
    # untethered UAV
    availability: float = 0.8
    uuav_altitudes_m: tuple[float, ...] = tuple(float(a) for a in range(20, 301, 20))
    # channel
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
    # Monte Carlo sizes
    samples_per_eval: int = 10_000
    samples_final: int = 100_000
    replications: int = 200
    grid_n_incl: int = 10
    grid_n_azim: int = 24
    grid_n_rad: int = 4
    refine_evals: int = 50
    # sweeps
    sweep_values: tuple[float, ...] = ()
    tether_values_m: tuple[float, ...] = (80.0, 100.0, 120.0)
    availability_values: tuple[float, ...] = (0.9,)
    # building field
    building_density_per_km2: float = 500.0
    building_height_scale_m: float = 20.0
    building_height_min_m: float = 5.0
    building_height_max_m: float = 100.0
    window_width_m: float = 2000.0
    window_height_m: float = 2000.0
    accessibility: float = 0.25


# Keys resolved per campaign when absent from the file: the accessibility
# campaign runs hundreds of environment replications, so its per-replication
# optimizer is deliberately coarser.
_CAMPAIGN_PROFILES: dict[str, dict[str, Any]] = {
    DISTANCE_SWEEP: {
        "sweep_values": tuple(float(d) for d in range(60, 301, 20)),
    },
    ACCESSIBILITY_SWEEP: {
        "sweep_values": (0.02, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.40),
        "samples_per_eval": 2_000,
        "samples_final": 20_000,
        "grid_n_incl": 6,
        "grid_n_azim": 12,
        "grid_n_rad": 3,
        "refine_evals": 10,
    },
}

_INT_KEYS = {
    "seed",
    "workers",
    "samples_per_eval",
    "samples_final",
    "replications",
    "grid_n_incl",
    "grid_n_azim",
    "grid_n_rad",
    "refine_evals",
}
_STR_KEYS = {"campaign", "scenario", "interference_mode"}
_LIST_KEYS = {"sweep_values", "uuav_altitudes_m", "tether_values_m", "availability_values"}
_ALL_KEYS = {f.name for f in fields(SimConfig)}


def _coerce(key: str, value: Any) -> Any:
    if key in _STR_KEYS:
        if not isinstance(value, str):
            raise ConfigError(f"key {key!r} must be a string, got {value!r}")
        return value
    if key in _INT_KEYS:
        if not isinstance(value, int) or isinstance(value, bool):
            raise ConfigError(f"key {key!r} must be an integer, got {value!r}")
        return value
    if key in _LIST_KEYS:
        if not isinstance(value, list) or not value:
            raise ConfigError(f"key {key!r} must be a non-empty list of numbers, got {value!r}")
        out = []
        for v in value:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError(f"key {key!r} must contain numbers only, got {v!r}")
            out.append(float(v))
        return tuple(out)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"key {key!r} must be a number, got {value!r}")
    return float(value)


def resolve_config(raw: dict[str, Any], overrides: dict[str, Any] | None = None) -> SimConfig:
    """Validate a flat key/value mapping and resolve campaign-profile defaults."""
    unknown = sorted(set(raw) - _ALL_KEYS)
    if unknown:
        raise ConfigError(f"unknown config key {unknown[0]!r}")
    values = {k: _coerce(k, v) for k, v in raw.items()}
    if overrides:
        values.update(overrides)

    campaign = values.get("campaign", SimConfig.campaign)
    profile = _CAMPAIGN_PROFILES.get(campaign)
    if profile is None:
        raise ConfigError(
            f"campaign must be one of {sorted(_CAMPAIGN_PROFILES)}, got {campaign!r}"
        )
    for key, default in profile.items():
        values.setdefault(key, default)

    cfg = SimConfig(**values)
    _validate(cfg)
    return cfg


def load_config(path: str | Path, overrides: dict[str, Any] | None = None) -> SimConfig:
    """Parse and validate a TOML config file."""
    try:
        with open(path, "rb") as f:
            raw = tomllib.load(f)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"malformed config {path}: {e}")
    return resolve_config(raw, overrides)


def _validate(cfg: SimConfig) -> None:
    if cfg.scenario not in _SCENARIOS:
        raise ConfigError(f"scenario must be one of {_SCENARIOS}, got {cfg.scenario!r}")
    if cfg.interference_mode not in (CO_CHANNEL, ORTHOGONAL):
        raise ConfigError(f"interference_mode must be co_channel or orthogonal")
    if cfg.seed < 0:
        raise ConfigError(f"seed must be non-negative, got {cfg.seed}")
    for key in ("workers", "samples_per_eval", "samples_final", "replications",
                "grid_n_incl", "grid_n_azim", "grid_n_rad"):
        if getattr(cfg, key) < 1:
            raise ConfigError(f"{key} must be at least 1, got {getattr(cfg, key)}")
    if cfg.refine_evals < 0:
        raise ConfigError(f"refine_evals must be non-negative, got {cfg.refine_evals}")
    for key in ("cluster_radius_m", "tether_max_m", "mbs_height_m", "carrier_hz",
                "building_density_per_km2", "building_height_scale_m",
                "window_width_m", "window_height_m"):
        if not getattr(cfg, key) > 0:
            raise ConfigError(f"{key} must be positive, got {getattr(cfg, key)}")
    if not 0.0 <= cfg.availability <= 1.0:
        raise ConfigError(f"availability must lie in [0, 1], got {cfg.availability}")
    if not 0.0 <= cfg.accessibility <= 1.0:
        raise ConfigError(f"accessibility must lie in [0, 1], got {cfg.accessibility}")
    if not 0.0 <= cfg.incl_min_deg <= 90.0:
        raise ConfigError(f"incl_min_deg must lie in [0, 90], got {cfg.incl_min_deg}")
    if list(cfg.sweep_values) != sorted(cfg.sweep_values):
        raise ConfigError("sweep_values must be sorted ascending")
    if cfg.campaign == ACCESSIBILITY_SWEEP:
        bad = [v for v in cfg.sweep_values if not 0.0 <= v <= 1.0]
        if bad:
            raise ConfigError(f"accessibility sweep values must lie in [0, 1], got {bad[0]}")
        bad_a = [a for a in cfg.availability_values if not 0.0 <= a <= 1.0]
        if bad_a:
            raise ConfigError(f"availability_values must lie in [0, 1], got {bad_a[0]}")
    if any(a <= cfg.user_height_m for a in cfg.uuav_altitudes_m):
        raise ConfigError("uuav_altitudes_m must all exceed user_height_m")


# Builders from the resolved configuration to domain objects.

def channel_params(cfg: SimConfig) -> ChannelParams:
    return ChannelParams(
        a_los=cfg.a_los,
        b_los=cfg.b_los,
        eta_los_db=cfg.eta_los_db,
        eta_nlos_db=cfg.eta_nlos_db,
        carrier_hz=cfg.carrier_hz,
        m_los=cfg.m_los,
        m_nlos=cfg.m_nlos,
        tx_power_uav_dbm=cfg.tx_power_uav_dbm,
        tx_power_mbs_dbm=cfg.tx_power_mbs_dbm,
        noise_dbm=cfg.noise_dbm,
        sinr_threshold_db=cfg.sinr_threshold_db,
        interference_mode=cfg.interference_mode,
    )


def cluster(cfg: SimConfig) -> UserCluster:
    """User cluster at the local frame origin."""
    center = Point3(0.0, 0.0, cfg.user_height_m)
    return UserCluster(center=center, radius=cfg.cluster_radius_m, user_height=cfg.user_height_m)


def mbs_position(cfg: SimConfig, distance_m: float | None = None) -> Point3:
    """Macro-station tower top, ``distance_m`` east of the cluster center."""
    d = cfg.mbs_distance_m if distance_m is None else distance_m
    return Point3(d, 0.0, cfg.mbs_height_m)


def hovering_region(cfg: SimConfig, anchor: Point3, tether_max_m: float | None = None) -> HoveringRegion:
    return HoveringRegion(
        anchor=anchor,
        tether_max=cfg.tether_max_m if tether_max_m is None else tether_max_m,
        incl_min=math.radians(cfg.incl_min_deg),
        alt_min=cfg.alt_min_m,
    )


def window(cfg: SimConfig) -> Window:
    """Simulation window centered on the cluster center (the origin)."""
    hw, hh = cfg.window_width_m / 2.0, cfg.window_height_m / 2.0
    return Window(x_min=-hw, y_min=-hh, x_max=hw, y_max=hh)


def grid_shape(cfg: SimConfig) -> tuple[int, int, int]:
    return (cfg.grid_n_incl, cfg.grid_n_azim, cfg.grid_n_rad)
