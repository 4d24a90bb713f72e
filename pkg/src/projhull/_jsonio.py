"""Deterministic file output: fixed float formatting, stable key order."""

from __future__ import annotations

import json
import math


def _round17(obj):
    if isinstance(obj, float):
        if math.isfinite(obj):
            return float(f"{obj:.17g}")
        return obj
    if isinstance(obj, dict):
        return {k: _round17(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round17(v) for v in obj]
    return obj


def json_dumps(obj) -> str:
    return json.dumps(_round17(obj), sort_keys=True, indent=2) + "\n"


def write_json(path: str, obj) -> None:
    with open(path, "w") as fh:
        fh.write(json_dumps(obj))


def fmt12(x: float) -> str:
    return f"{x:.12g}"
