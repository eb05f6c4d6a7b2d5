"""File formats: JSON with 17 significant digits, CSV with 12, LF line endings."""
from __future__ import annotations

import json
import math
from enum import Enum
from fractions import Fraction

import numpy as np

from .core import ResonantSystem, from_resonance, new_system


def _json_value(v, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(v, Enum):
        v = v.value
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    if isinstance(v, (float, np.floating, Fraction)):
        x = float(v)
        if not math.isfinite(x):
            return "null"
        return format(x, ".17g")
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_json_value(x, indent, level + 1)}" for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(v, (list, tuple, np.ndarray)):
        if len(v) == 0:
            return "[]"
        return "[" + ", ".join(_json_value(x, indent, level + 1) for x in v) + "]"
    raise TypeError(f"cannot serialise {type(v).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """Deterministic JSON: keys in insertion order, floats as %.17g."""
    return _json_value(obj, indent, 0) + "\n"


def system_to_json(system) -> str:
    return dumps(system.to_dict())


def system_from_json(text: str):
    """AmSystem from four slopes, or ResonantSystem from rho/k/l (p_minus optional)."""
    d = json.loads(text)
    if "rho" in d:
        res = ResonantSystem(float(d["rho"]), int(d["k"]), int(d["l"]), float(d.get("p_minus", 0.5)))
        from_resonance(res)
        return res
    return new_system(d["a_minus"], d["b_minus"], d["a_plus"], d["b_plus"])


def fmt12(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer, str)) and not isinstance(x, bool):
        return str(x)
    return format(float(x), ".12g")


def csv_text(columns: list[str], rows, header: dict | None = None) -> str:
    """CSV with an optional '# key=value,...' provenance line above the column names."""
    lines = []
    if header:
        lines.append("# " + ",".join(f"{k}={fmt12(v) if not isinstance(v, str) else v}"
                                     for k, v in header.items()))
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(fmt12(v) for v in row))
    return "\n".join(lines) + "\n"


def orbit_csv(points, header: dict) -> str:
    return csv_text(["x"], ([p] for p in points), header)


def intervals_csv(intervals, header: dict | None = None) -> str:
    return csv_text(["code", "lo", "hi"], ((a.label(), a.lo, a.hi) for a in intervals), header)


def density_csv(density, header: dict | None = None) -> str:
    b, v = density.breakpoints, density.values
    return csv_text(["lo", "hi", "density"], zip(b[:-1], b[1:], v), header)
