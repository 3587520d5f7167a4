"""Standalone rendering entry point: flags mirror PlotSpec."""

from __future__ import annotations

import argparse
import sys

from .io import SchemaError
from .render import DEFAULT_FLOOR, PlotSpec, render


def build_parser():
    parser = argparse.ArgumentParser(
        prog="figplots",
        description="Render bifloquet CSV/JSON outputs into figure-style "
                    "images (PNG/SVG)")
    parser.add_argument("--input", "-i", required=True,
                        help="input CSV path (sweep2d or line schema)")
    parser.add_argument("--output", "-o", required=True,
                        help="output image path (.png or .svg)")
    parser.add_argument("--panel", choices=("heatmap", "line", "dual-axis"),
                        default="heatmap")
    parser.add_argument("--floor", type=float, default=DEFAULT_FLOOR,
                        help="log-scale clipping floor for sensitivities")
    parser.add_argument("--report", default=None,
                        help="sweet-spot report JSON to overlay as markers")
    return parser


def run(argv=None):
    args = build_parser().parse_args(argv)
    try:
        spec = PlotSpec(input_path=args.input, output_path=args.output,
                        panel=args.panel, floor=args.floor,
                        report_path=args.report)
        result = render(spec)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {result.output_path} ({result.panel}, "
          f"grid {result.grid_shape}, {result.marker_count} markers)")
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
