"""Deterministic text serialization: fixed float formatting for CSV and JSON."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

__all__ = ["format_float", "json_text", "dump_json"]


def format_float(x: float) -> str:
    """Serialize a float with 17 significant digits (exact round-trip)."""
    return format(float(x), ".17g")


def _fragment(obj: Any, indent: int) -> str:
    pad = " " * indent
    inner = " " * (indent + 2)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = (
            f"{inner}{json.dumps(str(k))}: {_fragment(v, indent + 2)}" for k, v in obj.items()
        )
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = (f"{inner}{_fragment(v, indent + 2)}" for v in obj)
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def json_text(obj: Any) -> str:
    return _fragment(obj, 0) + "\n"


def dump_json(obj: Any, path) -> None:
    Path(path).write_text(json_text(obj), encoding="utf-8")
