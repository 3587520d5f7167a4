"""Offline rendering of bifloquet CSV/JSON outputs into figure images."""

from .io import LINE_HEADER, SWEEP2D_HEADER, SchemaError, read_sweet_report, read_table
from .render import DEFAULT_FLOOR, PlotSpec, RenderResult, render

__all__ = [
    "DEFAULT_FLOOR",
    "LINE_HEADER",
    "PlotSpec",
    "RenderResult",
    "SWEEP2D_HEADER",
    "SchemaError",
    "read_sweet_report",
    "read_table",
    "render",
]
