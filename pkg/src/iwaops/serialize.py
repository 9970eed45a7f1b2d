"""Canonical JSON: sorted keys, floats rendered as %.12e.

The fixed float format makes reports byte-stable: parsing a %.12e literal
and re-emitting it reproduces the same bytes (13 significant digits fit in
a double), so `classify --json` output round-trips identically.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

import numpy as np


def _render(obj) -> str:
    if obj is None or obj is True or obj is False:
        return json.dumps(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, Fraction):
        return json.dumps(str(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        val = float(obj)
        if not math.isfinite(val):
            raise ValueError(f"non-finite float in report: {val}")
        return f"{val:.12e}"
    if isinstance(obj, dict):
        items = sorted(obj.items())
        body = ",".join(f"{json.dumps(str(k))}:{_render(v)}" for k, v in items)
        return "{" + body + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = obj.tolist() if isinstance(obj, np.ndarray) else obj
        return "[" + ",".join(_render(v) for v in seq) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_json(obj) -> str:
    return _render(obj)
