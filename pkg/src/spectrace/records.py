"""JSON record schema and a serialiser that writes floats with 17 significant digits."""
from __future__ import annotations

import json
import math
from typing import Any

_COMPLEX = {
    "type": "object",
    "required": ["re", "im"],
    "properties": {"re": {"type": "number"}, "im": {"type": "number"}},
    "additionalProperties": False,
}

_DYADIC = {
    "type": "object",
    "required": ["kind", "target", "radius", "attained", "block_sums", "block_total", "valid"],
    "properties": {
        "kind": {"const": "dyadic"},
        "target": {"type": "integer", "minimum": 1},
        "radius": {"type": "integer", "minimum": 3},
        "attained": {"type": "number"},
        "block_sums": {"type": "array", "items": {"type": "number"}},
        "block_total": {"type": "number"},
        "valid": {"type": "boolean"},
    },
}

_GROWTH = {
    "type": "object",
    "required": ["kind", "radii", "partial_sums", "lower_bounds", "fit", "slope", "valid"],
    "properties": {
        "kind": {"const": "growth"},
        "radii": {"type": "array", "items": {"type": "integer"}},
        "partial_sums": {"type": "array", "items": {"type": "number"}},
        "lower_bounds": {"type": "array", "items": {"type": "number"}},
        "fit": {"enum": ["log", "linear"]},
        "slope": {"type": "number"},
        "valid": {"type": "boolean"},
    },
}

RECORD_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "spectrace result record",
    "type": "object",
    "required": [
        "tool_version", "subcommand", "params", "status", "terms", "runtime_ms", "extension_flag",
    ],
    "properties": {
        "tool_version": {"type": "string"},
        "subcommand": {"type": "string"},
        "params": {"type": "object"},
        "status": {"enum": ["ok", "TraceClass", "NotTraceClass", "Undetermined"]},
        "value": _COMPLEX,
        "error_bound": {"type": "number", "minimum": 0},
        "certificate": {"oneOf": [_DYADIC, _GROWTH]},
        "terms": {"type": "integer", "minimum": 0},
        "runtime_ms": {"type": ["number", "null"]},
        "extension_flag": {"type": "boolean"},
    },
}


def _encode(obj: Any) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        text = format(obj, ".17g")
        if not any(c in text for c in ".en"):
            text += ".0"
        return text
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = [f"{_encode(str(k))}: {_encode(v)}" for k, v in obj.items()]
        return "{" + ", ".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    if hasattr(obj, "item"):  # numpy scalar
        return _encode(obj.item())
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(record: dict[str, Any]) -> str:
    """Serialise ``record`` as one JSON line; floats keep 17 significant digits."""
    return _encode(record)
