"""Deterministic JSON and CSV writers.

JSON is emitted with sorted keys and two-space indentation; CSV values carry
17 significant digits, which round-trips doubles exactly. Both formats are
byte-identical across runs for identical inputs.
"""

from __future__ import annotations

import json
from pathlib import Path


def fmt_float(value: float) -> str:
    """17-significant-digit decimal form of a double."""
    return format(float(value), ".17g")


def dumps_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(dumps_json(obj), encoding="utf-8")
    return path


def csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return fmt_float(value)
    if isinstance(value, int):
        return str(value)
    text = str(value)
    if any(ch in text for ch in ",\"\n"):
        text = '"' + text.replace('"', '""') + '"'
    return text


def dumps_csv(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(csv_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.write_text(dumps_csv(header, rows), encoding="utf-8")
    return path


def label_text(label) -> str:
    """Compact text form of a mode label (int or multi-index tuple)."""
    if isinstance(label, tuple):
        return ";".join(str(int(v)) for v in label)
    return str(int(label))
