"""Readers for the bifloquet CLI's CSV/JSON output schemas.

The plots package consumes only these files; it never computes physics.
"""

from __future__ import annotations

import json
import math

SWEEP2D_HEADER = ["b", "nu", "omega", "gap", "dgap_db", "dgap_dOmega",
                  "gamma_phi", "t_phi", "omega_star", "flags"]
LINE_HEADER = ["b", "gap", "dgap_db", "dgap_dOmega", "gamma_phi", "t_phi",
               "flags"]


class SchemaError(ValueError):
    """The input file does not conform to the expected CSV/JSON schema."""


def _parse_float(s):
    if s == "inf":
        return math.inf
    if s == "-inf":
        return -math.inf
    if s == "nan":
        return math.nan
    return float(s)


def read_table(path, expected_header):
    """Read a schema CSV into {column: list}; floats parsed, flags kept."""
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines:
        raise SchemaError(f"empty input file: {path}")
    header = lines[0].split(",")
    if header != expected_header:
        raise SchemaError(
            f"{path}: header {header!r} does not match the expected "
            f"schema {expected_header!r}")
    cols = {h: [] for h in header}
    for ln in lines[1:]:
        cells = ln.split(",")
        if len(cells) != len(header):
            raise SchemaError(f"{path}: malformed row {ln!r}")
        for h, c in zip(header, cells):
            try:
                cols[h].append(c if h == "flags" else _parse_float(c))
            except ValueError as exc:
                raise SchemaError(f"{path}: bad cell {c!r} in column "
                                  f"{h!r}") from exc
    if not cols[header[0]]:
        raise SchemaError(f"{path}: no data rows")
    return cols


def read_sweet_report(path):
    """Read a sweet-spot report JSON with dc_sweet/doubly_sweet/sour lists."""
    with open(path) as fh:
        payload = json.load(fh)
    for key in ("dc_sweet", "doubly_sweet", "sour"):
        if key not in payload or not isinstance(payload[key], list):
            raise SchemaError(f"{path}: missing or malformed list {key!r}")
    return payload
