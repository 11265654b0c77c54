"""Lossless JSON encoding for CLI requests and result records.

Floats are rendered with 17 significant digits, which round-trips every
IEEE double exactly; re-parsing an emitted record therefore reproduces
the original values bit for bit.
"""
from __future__ import annotations

import json
import math

import numpy as np

from .space import Pair, as_point


def format_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("records must contain only finite numbers")
    return format(x, ".17g")


def dumps(obj) -> str:
    """Serialize a record with exact-round-trip floats."""
    if obj is None:
        return "null"
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, dict):
        parts = []
        for k, v in obj.items():
            if not isinstance(k, str):
                raise TypeError("record keys must be strings")
            parts.append(json.dumps(k) + ": " + dumps(v))
        return "{" + ", ".join(parts) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def point_json(arr) -> list[float]:
    return [float(v) for v in as_point(arr)]


def pair_json(p: Pair) -> dict:
    return {"first": point_json(p.first), "second": point_json(p.second)}


def parse_pair(obj) -> Pair:
    """Accept {"first": [...], "second": [...]} or a two-element array."""
    if isinstance(obj, dict):
        if "first" not in obj or "second" not in obj:
            raise ValueError("pair object needs 'first' and 'second'")
        return Pair(as_point(obj["first"]), as_point(obj["second"]))
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return Pair(as_point(obj[0]), as_point(obj[1]))
    raise ValueError("a pair must be {'first':..., 'second':...} or [first, second]")


def load_request(text: str) -> dict:
    try:
        req = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed JSON request: {exc}") from exc
    if not isinstance(req, dict):
        raise ValueError("request must be a JSON object")
    return req
