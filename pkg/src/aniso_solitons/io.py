"""CSV and JSON artifacts.

Floats are written with 17 significant digits so that files round-trip
exactly; JSON keys are sorted and no timestamps are written, so identical
runs give byte-identical files.
"""

import csv
import json
from pathlib import Path

import numpy as np

__all__ = ["SchemaError", "write_csv", "read_csv", "write_json", "read_json", "REPORT_SCHEMA"]

REPORT_SCHEMA = 1


class SchemaError(ValueError):
    """A file does not have the expected layout."""


def write_csv(path, header, columns):
    cols = [np.asarray(c, dtype=float).ravel() for c in columns]
    if len({len(c) for c in cols}) != 1:
        raise ValueError("columns must have equal length")
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        np.savetxt(fh, np.column_stack(cols), fmt="%.17g", delimiter=",")


def read_csv(path, expected=None):
    """Return ``(header, data)``; ``data`` has one column per header field."""
    path = Path(path)
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r]
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise SchemaError(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    if expected is not None and header != list(expected):
        raise SchemaError(f"{path}: expected header {','.join(expected)}, got {','.join(header)}")
    if len(rows) < 2:
        raise SchemaError(f"{path} has a header but no data")
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:]])
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric entry ({exc})") from exc
    if data.shape[1] != len(header):
        raise SchemaError(f"{path}: rows do not match the header")
    if not np.all(np.isfinite(data)):
        raise SchemaError(f"{path}: non-finite entries")
    return header, data


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        val = float(obj)
        return val if np.isfinite(val) else str(val)
    return obj


def write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(_plain(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
