"""Deterministic JSON/CSV emission and input parsing for the CLI.

Output bytes are stable: floats are printed with 17 significant digits,
switching to scientific notation outside [1e-4, 1e6); JSON keys are
sorted; CSV uses comma separators and bare ``\\n`` newlines.
"""

from __future__ import annotations

import json
import math
import os
from typing import Sequence

import numpy as np

from .errors import ValidationError


def fmt_float(x: float) -> str:
    """Format a float with 17 significant digits and a fixed notation rule."""
    x = float(x)
    if x != x:
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        return "0"
    ax = abs(x)
    if ax < 1e-4 or ax >= 1e6:
        return f"{x:.16e}"
    exp = int(math.floor(math.log10(ax)))
    # guard the floor against log10 rounding at powers of ten
    if ax >= 10.0 ** (exp + 1):
        exp += 1
    elif ax < 10.0 ** exp:
        exp -= 1
    return f"{x:.{16 - exp}f}"


def _emit(obj, indent: int, out: list):
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        keys = sorted(obj.keys())
        for i, key in enumerate(keys):
            if not isinstance(key, str):
                raise ValidationError("JSON object keys must be strings")
            out.append(pad + "  " + json.dumps(key) + ": ")
            _emit(obj[key], indent + 1, out)
            out.append(",\n" if i < len(keys) - 1 else "\n")
        out.append(pad + "}")
        return
    if isinstance(obj, (list, tuple, np.ndarray)):
        items = list(np.asarray(obj).tolist()) if isinstance(obj, np.ndarray) \
            else list(obj)
        if not items:
            out.append("[]")
            return
        out.append("[\n")
        for i, item in enumerate(items):
            out.append(pad + "  ")
            _emit(item, indent + 1, out)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(pad + "]")
        return
    if isinstance(obj, str):
        out.append(json.dumps(obj))
        return
    if isinstance(obj, bool) or obj is None:
        out.append(json.dumps(obj))
        return
    if isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
        return
    if isinstance(obj, (float, np.floating)):
        out.append(fmt_float(float(obj)))
        return
    raise ValidationError(f"cannot serialize {type(obj).__name__}")


def dumps_json(obj) -> str:
    out: list = []
    _emit(obj, 0, out)
    out.append("\n")
    return "".join(out)


def dumps_csv(header: Sequence[str], rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, str):
                cells.append(cell)
            elif isinstance(cell, (int, np.integer)) and not isinstance(cell, bool):
                cells.append(str(int(cell)))
            else:
                cells.append(fmt_float(float(cell)))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Input parsing
# ---------------------------------------------------------------------------


def load_json_arg(arg: str, field: str):
    """Interpret a CLI argument as inline JSON (when it looks like JSON) or
    as a path to a JSON file."""
    text = arg.strip()
    if not text.startswith(("{", "[")):
        if not os.path.exists(arg):
            raise ValidationError(f"file not found: {arg}", field=field)
        try:
            with open(arg, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ValidationError(f"cannot read {arg}: {exc}", field=field)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}", field=field)


def parse_number_list(text: str, field: str) -> np.ndarray:
    try:
        values = [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise ValidationError(f"expected comma-separated numbers: {exc}",
                              field=field)
    if not values:
        raise ValidationError("expected at least one number", field=field)
    return np.array(values)


def parse_matrix(obj, field: str) -> np.ndarray:
    """Matrices travel as ``{"dim": d, "data": [row-major d*d floats]}``."""
    if not isinstance(obj, dict) or "dim" not in obj or "data" not in obj:
        raise ValidationError('matrix must be {"dim": d, "data": [...]}',
                              field=field)
    try:
        dim = int(obj["dim"])
        data = np.asarray(obj["data"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad matrix payload: {exc}", field=field)
    if dim < 1 or data.shape != (dim * dim,):
        raise ValidationError(f"matrix data must hold dim*dim={dim * dim} "
                              "row-major entries", field=field)
    return data.reshape(dim, dim)


def matrix_payload(mat: np.ndarray) -> dict:
    mat = np.asarray(mat, dtype=float)
    return {"dim": int(mat.shape[0]), "data": mat.reshape(-1)}


def parse_points(obj, field: str):
    """A list of vector points, or of matrix payloads."""
    if not isinstance(obj, list) or not obj:
        raise ValidationError("expected a nonempty JSON array of points",
                              field=field)
    if isinstance(obj[0], dict):
        return [parse_matrix(o, field=f"{field}[{i}]") for i, o in enumerate(obj)]
    try:
        pts = [np.asarray(o, dtype=float) for o in obj]
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad point payload: {exc}", field=field)
    for i, p in enumerate(pts):
        if p.ndim != 1:
            raise ValidationError("vector points must be flat arrays",
                                  field=f"{field}[{i}]")
    return pts


def parse_generator_spec(obj, field: str = "gen"):
    from .generators import GeneratorSpec

    if not isinstance(obj, dict) or "variant" not in obj:
        raise ValidationError('generator spec must carry a "variant" key',
                              field=field)
    params = {k: v for k, v in obj.items() if k != "variant"}
    variant = obj["variant"]
    if variant == "quadratic" and "q" in params:
        params["q"] = parse_matrix(params["q"], field=f"{field}.q")
        if params.get("c") is not None:
            params["c"] = np.asarray(params["c"], dtype=float)
    if variant == "mixture_negentropy" and "bases" in params:
        params["bases"] = np.asarray(params["bases"], dtype=float)
    return GeneratorSpec(variant=variant, params=params)


def parse_scalar_mean_spec(obj, field: str = "spec"):
    from .averages import lse_mean_spec, power_mean_spec

    if not isinstance(obj, dict) or "variant" not in obj:
        raise ValidationError('mean spec must carry a "variant" key', field=field)
    variant = obj["variant"]
    if variant == "power":
        if "p" not in obj:
            raise ValidationError("power mean spec needs p", field=f"{field}.p")
        return power_mean_spec(float(obj["p"]))
    if variant == "lse":
        return lse_mean_spec()
    if variant == "custom":
        raise ValidationError("custom means are not available through the CLI",
                              field=field)
    raise ValidationError(f"unknown mean variant {variant!r}",
                          field=f"{field}.variant")
