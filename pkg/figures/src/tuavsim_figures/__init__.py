"""Figure rendering for simulation campaign CSV results."""

from .render import (
    ACCESSIBILITY_SWEEP,
    DISTANCE_SWEEP,
    REQUIRED_COLUMNS,
    FigureSpec,
    SchemaError,
    build_figure,
    load_results,
    render,
    series_by_scenario,
)

__all__ = [
    "ACCESSIBILITY_SWEEP",
    "DISTANCE_SWEEP",
    "FigureSpec",
    "REQUIRED_COLUMNS",
    "SchemaError",
    "build_figure",
    "load_results",
    "render",
    "series_by_scenario",
]
