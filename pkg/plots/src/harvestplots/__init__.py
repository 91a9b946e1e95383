"""Figure rendering for becharvest CSV outputs; the CSV schema is the only
contract with the computing package."""

__version__ = "0.1.0"

from .render import (AXIS_LABELS, STYLES, PlotSpec, SchemaError,
                     build_figure, build_heatmap_grid, load_table, render)

__all__ = ["AXIS_LABELS", "STYLES", "PlotSpec", "SchemaError",
           "build_figure", "build_heatmap_grid", "load_table", "render"]
