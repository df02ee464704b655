"""Deterministic report serialization.

JSON reports are emitted through a canonical encoder: keys sorted, floats
rendered with 17 significant digits (enough to round-trip IEEE doubles), LF
line endings, UTF-8.  Two runs with the same resolved config therefore
produce byte-identical files.  CSV files get a header row, comma separators,
and '.' decimals.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "SCHEMA_VERSION",
    "canonical_json",
    "format_float",
    "report_envelope",
    "write_csv",
    "write_json",
]

SCHEMA_VERSION = 1


def format_float(value: float) -> str:
    """17-significant-digit decimal rendering of one float."""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".17g")


def _encode(obj, indent: int) -> str:
    pad = "  " * indent
    child_pad = "  " * (indent + 1)
    if obj is None or isinstance(obj, bool) or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if math.isfinite(value):
            return format_float(value)
        return json.dumps(format_float(value))
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{child_pad}{_encode(item, indent + 1)}" for item in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = []
        for key in sorted(obj, key=str):
            encoded = _encode(obj[key], indent + 1)
            items.append(f"{child_pad}{json.dumps(str(key))}: {encoded}")
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if hasattr(obj, "to_dict"):
        return _encode(obj.to_dict(), indent)
    raise TypeError(f"cannot serialize object of type {type(obj).__name__}")


def canonical_json(obj) -> str:
    """Canonical JSON text for ``obj`` (no trailing newline)."""
    return _encode(obj, 0)


def write_json(path: str | Path, obj) -> None:
    """Write canonical JSON plus a trailing LF."""
    Path(path).write_bytes((canonical_json(obj) + "\n").encode("utf-8"))


def _csv_cell(value) -> str:
    if isinstance(value, (float, np.floating)):
        return format_float(float(value))
    if value is None:
        return ""
    text = str(value)
    if any(ch in text for ch in (",", '"', "\n")):
        text = '"' + text.replace('"', '""') + '"'
    return text


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    """Write a CSV file: header row, comma separators, LF endings, UTF-8."""
    lines = [",".join(_csv_cell(cell) for cell in header)]
    for row in rows:
        lines.append(",".join(_csv_cell(cell) for cell in row))
    Path(path).write_bytes(("\n".join(lines) + "\n").encode("utf-8"))


def report_envelope(command: str, version: str, config: dict, result) -> dict:
    """Standard report wrapper: schema tag, code version, resolved config."""
    return {
        "schema": SCHEMA_VERSION,
        "version": version,
        "command": command,
        "config": config,
        "result": result,
    }
