"""Deterministic text encodings for artifacts.

Floats are rendered with 17 significant digits so a parse of the output
recovers the exact double, and identical inputs always produce identical
bytes.  JSON objects are emitted with sorted keys; files are written in
binary mode so the bytes do not depend on platform newline handling.
"""
from __future__ import annotations

import json
import math

import numpy as np

from .errors import ValidationError


def format_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValidationError("artifacts cannot hold non-finite numbers")
    if x == 0.0:
        # normalize the sign of zero so -0.0 and 0.0 serialize identically
        x = 0.0
    return format(x, ".17g")


def _encode(obj) -> str:
    if isinstance(obj, dict):
        items = sorted(obj.items())
        inner = ",".join(json.dumps(str(k)) + ":" + _encode(v) for k, v in items)
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_encode(v) for v in obj) + "]"
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    raise ValidationError(f"cannot serialize {type(obj).__name__} deterministically")


def json_text(obj) -> str:
    return _encode(obj) + "\n"


def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(float(value))
    text = str(value)
    if "," in text or "\n" in text or '"' in text:
        raise ValidationError("csv cells must not need quoting")
    return text


def csv_text(header, rows) -> str:
    lines = [",".join(str(h) for h in header)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def write_bytes(path, text: str) -> None:
    with open(path, "wb") as fh:
        fh.write(text.encode("utf-8"))
