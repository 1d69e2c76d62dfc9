"""Deterministic JSON output.

Floats are printed with 12 significant digits and exact rationals as "p/q"
strings, so identical inputs produce byte-identical reports.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

from .errors import ParseError


def _format_float(v: float) -> str:
    if math.isnan(v) or math.isinf(v):
        raise ValueError(f"cannot serialize {v!r}")
    if v == 0.0:
        v = 0.0  # normalize -0.0
    return format(float(v), ".12g")


def _write(obj, out: list, indent: int | None, level: int) -> None:
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    closepad = "" if indent is None else "\n" + " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        out.append(json.dumps(obj))
    elif isinstance(obj, Fraction):
        out.append(json.dumps(str(obj)))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for idx, (key, val) in enumerate(obj.items()):
            if idx:
                out.append("," if indent is None else ",")
            out.append(pad)
            out.append(json.dumps(str(key)))
            out.append(": " if indent is not None else ":")
            _write(val, out, indent, level + 1)
        out.append(closepad)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            out.append("[]")
            return
        out.append("[")
        for idx, val in enumerate(seq):
            if idx:
                out.append(",")
            out.append(pad)
            _write(val, out, indent, level + 1)
        out.append(closepad)
        out.append("]")
    else:
        # numpy scalars and arrays reduce to the cases above
        if hasattr(obj, "tolist"):
            _write(obj.tolist(), out, indent, level)
        elif hasattr(obj, "item"):
            _write(obj.item(), out, indent, level)
        else:
            raise ValueError(f"cannot serialize {type(obj).__name__}")


def canonical_dumps(obj, compact: bool = False) -> str:
    out: list = []
    _write(obj, out, None if compact else 2, 0)
    return "".join(out)


def load_json_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ParseError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from exc
