"""Deterministic JSON/CSV serialization and run manifests.

Floats are written with 17 significant digits, fractions as ``"p/q"``
strings and non-finite values as the strings ``"inf"`` / ``"-inf"`` / ``"nan"``
so the output stays strict JSON.  Keys are sorted.
"""

from __future__ import annotations

import dataclasses
import hashlib
import io
import csv
import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1


def _float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    text = format(x, ".17g")
    if not any(ch in text for ch in ".en"):
        text += ".0"
    return text


def to_plain(obj):
    """Reduce numpy / dataclass / Fraction values to JSON-ready Python objects."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        if hasattr(obj, "to_dict"):
            return to_plain(obj.to_dict())
        return {f.name: to_plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if hasattr(obj, "to_string"):
        return obj.to_string()
    return obj


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_encode(obj[k], indent, level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _encode(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(payload, indent: int = 2) -> str:
    return _encode(to_plain(payload), indent, 0) + "\n"


def rows_to_csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        out = []
        for col in columns:
            v = to_plain(row.get(col))
            out.append(format(v, ".17g") if isinstance(v, float) else v)
        writer.writerow(out)
    return buf.getvalue()


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_file(path: str | Path) -> str:
    return sha256_bytes(Path(path).read_bytes())


@dataclasses.dataclass
class RunManifest:
    command_line: list[str]
    seeds: dict
    input_digests: dict
    tool_version: str
    wall_time: float = 0.0
    output_digests: dict = dataclasses.field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "command_line": self.command_line,
            "seeds": self.seeds,
            "input_digests": self.input_digests,
            "tool_version": self.tool_version,
            "wall_time": self.wall_time,
            "output_digests": self.output_digests,
        }
