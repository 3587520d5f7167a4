"""CSV/JSON serialization with round-trip exact decimal floats."""

from __future__ import annotations

import json
import math


def format_float(x):
    """Shortest decimal that round-trips bit-exactly; inf/nan spelled plainly."""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return repr(x)


def parse_float(s):
    if s == "inf":
        return math.inf
    if s == "-inf":
        return -math.inf
    if s == "nan":
        return math.nan
    return float(s)


def write_csv(path, header, rows):
    """Rows are sequences matching the header; floats serialized round-trip."""
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            cells = [c if isinstance(c, str) else format_float(c) for c in row]
            fh.write(",".join(cells) + "\n")


def read_csv(path):
    """Read a schema CSV back into {column: list}; floats parsed, flags kept."""
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines:
        raise ValueError(f"empty CSV file: {path}")
    header = lines[0].split(",")
    cols = {h: [] for h in header}
    for ln in lines[1:]:
        cells = ln.split(",")
        if len(cells) != len(header):
            raise ValueError(f"malformed CSV row in {path}: {ln!r}")
        for h, c in zip(header, cells):
            cols[h].append(c if h == "flags" else parse_float(c))
    return cols


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "tolist"):
        return _jsonable(obj.tolist())
    if isinstance(obj, float):
        if math.isinf(obj) or math.isnan(obj):
            return format_float(obj)
        return obj
    return obj


def write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(_jsonable(payload), fh, indent=1)
        fh.write("\n")


def read_json(path):
    with open(path) as fh:
        return json.load(fh)
