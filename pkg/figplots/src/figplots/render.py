"""Rendering of sweep CSVs into heatmap and line figures.

Rendering is a pure function of the input files: repeated runs produce
structurally identical images (axes, ranges, marker counts). Log-scale
clipping floors affect rendering only, never the underlying data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import LogNorm  # noqa: E402

from .io import LINE_HEADER, SWEEP2D_HEADER, SchemaError, read_table, read_sweet_report

DEFAULT_FLOOR = 1e-8


@dataclass(frozen=True)
class PlotSpec:
    """One rendering request.

    panel is "heatmap" (three-panel sweep grid), "line" (single-axis bias
    scan), or "dual-axis" (bias scan with DC sensitivity on a log left
    axis and AC sensitivity on the right axis). floor is the log-scale
    clipping floor for sensitivity color maps; report optionally overlays
    doubly-sweet markers on the lifetime panel.
    """

    input_path: str
    output_path: str
    panel: str = "heatmap"
    floor: float = DEFAULT_FLOOR
    report_path: str | None = None

    def __post_init__(self):
        if self.panel not in ("heatmap", "line", "dual-axis"):
            raise ValueError("panel must be 'heatmap', 'line', or "
                             "'dual-axis'")
        if not (self.floor > 0 and math.isfinite(self.floor)):
            raise ValueError("floor must be positive and finite")


@dataclass(frozen=True)
class RenderResult:
    """Structural summary of a rendered image, for reproducibility checks."""

    output_path: str
    panel: str
    grid_shape: tuple = ()
    marker_count: int = 0
    axis_ranges: tuple = ()


def render(spec):
    """Render one PlotSpec to its output image and return a RenderResult."""
    if spec.panel == "heatmap":
        return _render_heatmap(spec)
    return _render_line(spec)


def _grid_from_sweep(cols):
    b = np.asarray(cols["b"])
    nu = np.asarray(cols["nu"])
    b_vals = np.unique(b)
    nu_vals = np.unique(nu)
    if b_vals.size * nu_vals.size != b.size:
        raise SchemaError("sweep CSV rows do not form a rectangular "
                          "(b, nu) grid")
    shape = (nu_vals.size, b_vals.size)

    def grid(name):
        return np.asarray(cols[name]).reshape(shape)

    return b_vals, nu_vals, grid


def _render_heatmap(spec):
    cols = read_table(spec.input_path, SWEEP2D_HEADER)
    b_vals, nu_vals, grid = _grid_from_sweep(cols)
    panels = [
        (np.abs(grid("dgap_db")), "|d(gap)/db|"),
        (np.abs(grid("dgap_dOmega")), "|d(gap)/dOmega|"),
        (grid("t_phi"), "T_phi"),
    ]
    extent = (float(b_vals[0]), float(b_vals[-1]),
              float(nu_vals[0]), float(nu_vals[-1]))

    fig, axes = plt.subplots(1, 3, figsize=(13, 4), constrained_layout=True)
    for ax, (data, label) in zip(axes, panels):
        clipped = np.where(np.isfinite(data), data, np.nan)
        clipped = np.clip(clipped, spec.floor, None)
        vmax = np.nanmax(clipped)
        if not (np.isfinite(vmax) and vmax > spec.floor):
            vmax = spec.floor * 10.0
        im = ax.imshow(clipped, origin="lower", aspect="auto",
                       extent=extent, norm=LogNorm(vmin=spec.floor,
                                                   vmax=vmax))
        ax.set_xlabel("b")
        ax.set_ylabel("nu")
        ax.set_title(label)
        fig.colorbar(im, ax=ax)

    marker_count = 0
    if spec.report_path is not None:
        report = read_sweet_report(spec.report_path)
        doubly = report["doubly_sweet"]
        marker_count = len(doubly)
        if doubly:
            xs = [entry["b"] for entry in doubly]
            ys = [entry["nu"] for entry in doubly]
            axes[2].plot(xs, ys, "o", markersize=6, markerfacecolor="none",
                         markeredgecolor="magenta", markeredgewidth=1.5)

    fig.savefig(spec.output_path)
    plt.close(fig)
    return RenderResult(output_path=spec.output_path, panel="heatmap",
                        grid_shape=(nu_vals.size, b_vals.size),
                        marker_count=marker_count, axis_ranges=(extent,))


def _render_line(spec):
    cols = read_table(spec.input_path, LINE_HEADER)
    b = np.asarray(cols["b"])
    dc = np.abs(np.asarray(cols["dgap_db"]))
    ac = np.abs(np.asarray(cols["dgap_dOmega"]))

    fig, ax_left = plt.subplots(figsize=(7, 4.5), constrained_layout=True)
    ax_left.plot(b, np.clip(dc, spec.floor, None), color="black",
                 label="|d(gap)/db|")
    ax_left.set_yscale("log")
    ax_left.set_xlabel("b")
    ax_left.set_ylabel("|d(gap)/db|")

    ranges = ((float(b[0]), float(b[-1])),)
    if spec.panel == "dual-axis":
        ax_right = ax_left.twinx()
        ax_right.plot(b, ac, color="crimson", label="|d(gap)/dOmega|")
        ax_right.set_ylabel("|d(gap)/dOmega|")
        ranges = ranges + (tuple(ax_right.get_ylim()),)

    fig.savefig(spec.output_path)
    plt.close(fig)
    return RenderResult(output_path=spec.output_path, panel=spec.panel,
                        grid_shape=(b.size,), axis_ranges=ranges)
