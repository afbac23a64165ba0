"""Risk evaluation and planning for tethered robots on occupancy grids."""

from ._core import (
    ConfigError,
    MapParseError,
    OccupancyGrid,
    PathParseError,
    PlanningError,
    RiskConfig,
    StartMismatchError,
    ValidationError,
    __version__,
    evaluate,
    failure_rate,
    finishes,
    load_map,
    load_map_file,
    parse_config,
    plan,
    run_cli,
    tether,
)

__all__ = [
    "ConfigError",
    "MapParseError",
    "OccupancyGrid",
    "PathParseError",
    "PlanningError",
    "RiskConfig",
    "StartMismatchError",
    "ValidationError",
    "__version__",
    "evaluate",
    "failure_rate",
    "finishes",
    "load_map",
    "load_map_file",
    "parse_config",
    "plan",
    "run_cli",
    "tether",
]
