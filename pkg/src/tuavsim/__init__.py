"""Monte-Carlo coverage simulator for tethered vs. untethered aerial base stations."""

from .channel import (
    CO_CHANNEL,
    ORTHOGONAL,
    ChannelParams,
    InvalidElevationError,
    LinkSample,
    los_probability,
    mean_rx_power_dbm,
    path_loss_db,
    sample_link,
    sinr_db,
)
from .config import ConfigError, SimConfig, load_config, resolve_config
from .coverage import (
    CoverageEstimate,
    coverage_given_uav,
    coverage_mbs_only,
    coverage_with_availability,
    wilson_interval,
)
from .campaigns import (
    ResultRow,
    run_accessibility_campaign,
    run_distance_campaign,
    simulate_single,
    write_rows_csv,
)
from .deployment import (
    Building,
    BuildingField,
    NoAccessibleRooftopError,
    Scenario,
    TetheredMode,
    UntetheredMode,
    UserCluster,
    Window,
    generate_buildings,
    gs_from_building,
    nearest_accessible_rooftop,
    sample_marked_buildings,
    sample_users,
)
from .geometry import (
    DegenerateLinkError,
    HoveringRegion,
    Point3,
    elevation_angle,
    region_contains,
    region_grid,
)
from .placement import PlacementResult, optimize_tuav, place_uuav
from .version import __version__

__all__ = [
    "__version__",
    "Building",
    "BuildingField",
    "ChannelParams",
    "CO_CHANNEL",
    "ConfigError",
    "CoverageEstimate",
    "DegenerateLinkError",
    "HoveringRegion",
    "InvalidElevationError",
    "LinkSample",
    "NoAccessibleRooftopError",
    "ORTHOGONAL",
    "PlacementResult",
    "Point3",
    "ResultRow",
    "Scenario",
    "SimConfig",
    "TetheredMode",
    "UntetheredMode",
    "UserCluster",
    "Window",
    "coverage_given_uav",
    "coverage_mbs_only",
    "coverage_with_availability",
    "elevation_angle",
    "generate_buildings",
    "gs_from_building",
    "load_config",
    "los_probability",
    "mean_rx_power_dbm",
    "nearest_accessible_rooftop",
    "optimize_tuav",
    "path_loss_db",
    "place_uuav",
    "region_contains",
    "region_grid",
    "resolve_config",
    "run_accessibility_campaign",
    "run_distance_campaign",
    "sample_link",
    "sample_marked_buildings",
    "sample_users",
    "simulate_single",
    "sinr_db",
    "wilson_interval",
    "write_rows_csv",
]
