"""Deterministic CSV / JSON output and run-config validation."""

from __future__ import annotations

import csv
import io as _io
import json
import math
import sys
from pathlib import Path

import jsonschema
import numpy as np


def _plain(obj):
    """Convert numpy scalars/arrays (recursively) to JSON-ready Python values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, np.generic):
        return _plain(obj.item())
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return None
    return obj


def _cell(v) -> str:
    v = _plain(v)
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def csv_text(rows: list, fieldnames: list | None = None) -> str:
    """RFC 4180 text (CRLF line ends, header row always present)."""
    if fieldnames is None:
        fieldnames = list(rows[0].keys()) if rows else []
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(fieldnames)
    for row in rows:
        w.writerow([_cell(row.get(f)) for f in fieldnames])
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(_plain(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)


def write_csv(rows: list, out: str | None, fieldnames: list | None = None) -> None:
    emit(csv_text(rows, fieldnames), out)


def write_json(obj, out: str | None) -> None:
    emit(json_text(obj), out)


def read_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


# ------------------------------------------------------------------ config

_num = {"type": "number"}
_int = {"type": "integer"}
_str = {"type": "string"}
_q = {"anyOf": [{"type": "number", "minimum": 1}, {"enum": ["inf"]}]}
_vec = {"type": "array", "items": {"type": "number"}}

PROPERTIES = {
    "command": {
        "enum": [
            "build",
            "eval",
            "residuals",
            "verify",
            "seminorm",
            "dimension",
            "superdensity",
            "stokes",
            "escape",
            "witness",
            "phase",
            "check",
        ]
    },
    "regime": {"enum": ["sobolev", "dimension", "extremal", "custom"]},
    "k": {"type": "integer", "minimum": 1},
    "B": {"type": "integer", "minimum": 1},
    "delta": {"type": "number", "exclusiveMinimum": 0},
    "d": _num,
    "s": _num,
    "values": _vec,
    "depth": {"type": "integer", "minimum": 0},
    "lo": _vec,
    "hi": _vec,
    "scaffold": _str,
    "distribution": {"enum": ["heisenberg", "zero", "constant", "polynomial"]},
    "matrix": {"type": "array", "items": _vec},
    "polynomial": {"type": "object"},
    "points": {"type": "integer", "minimum": 1},
    "samples": {"type": "integer", "minimum": 1},
    "budget": {"type": "integer", "minimum": 1},
    "seed": {"type": "integer", "minimum": 0},
    "target": {"enum": ["half-interval", "cantor"]},
    "p": _num,
    "levels": {"type": "array", "items": _int},
    "b": _num,
    "radii": _vec,
    "form": _str,
    "center": _vec,
    "direction": _vec,
    "half_sides": _vec,
    "order": {"type": "integer", "minimum": 2},
    "offsets": {"type": "integer", "minimum": 1},
    "q": _q,
    "resolution": {"type": "integer", "minimum": 16},
    "out": _str,
    "jobs": {"type": "integer", "minimum": 1},
    "check": {"type": "boolean"},
}

SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "properties": PROPERTIES,
    "required": ["command"],
    "additionalProperties": False,
}


class ConfigError(ValueError):
    pass


def validate_config(cfg: dict) -> dict:
    try:
        jsonschema.validate(cfg, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{where}: {exc.message}") from None
    return cfg
