"""JSON file formats.

Simplex:        {"n": int, "vertices": [[x; n]; n+1]}
NormalFan:      {"n": int, "normals": [[x; n]; n+1], "kappa": [x; n+1]}
ContactSet:     {"points": [[x; n]; n+1]} or {"barycentric": [[x; n+1]; n+1]}
                (barycentric is a list of columns)
Coefficients:   {"coeffs": [{"i": int, "j": int, "t": x}]}
Oracle config:  {"epsilon": x, "n_random": int, "seed": int}

Floats are written with 17 significant digits so files round-trip exactly.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .contacts import ContactSet, contacts_from_barycentric, contacts_from_points
from .geometry import NormalFan, Simplex, make_simplex
from .oracle import OracleConfig
from .tolerances import DEFAULT


class ParseError(ValueError):
    pass


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        text = format(x, ".17g")
        if "e" not in text and "." not in text:
            text += ".0"
        return text
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist(), indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    return _encode(obj, indent, 0) + "\n"


def _read(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top-level JSON value must be an object")
    return data


def _matrix(data, key, path):
    try:
        arr = np.array(data[key], dtype=float)
    except KeyError:
        raise ParseError(f"{path}: missing key {key!r}") from None
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: {key!r} is not a numeric matrix ({exc})") from None
    if arr.ndim != 2:
        raise ParseError(f"{path}: {key!r} must be a list of lists")
    return arr


def simplex_from_json(data, tol=DEFAULT, path="<simplex>") -> Simplex:
    verts = _matrix(data, "vertices", path)
    n = data.get("n", verts.shape[1])
    if verts.shape != (n + 1, n):
        raise ParseError(f"{path}: expected {n + 1} vertices of dimension {n}, got {verts.shape}")
    return make_simplex(verts, tol)


def load_simplex(path, tol=DEFAULT) -> Simplex:
    return simplex_from_json(_read(path), tol, path)


def load_fan(path) -> NormalFan:
    data = _read(path)
    normals = _matrix(data, "normals", path)
    kappa = np.array(data.get("kappa", []), dtype=float)
    if kappa.shape != (normals.shape[0],):
        raise ParseError(f"{path}: 'kappa' must have one entry per normal")
    return NormalFan.from_parts(normals, kappa)


def contacts_from_json(s: Simplex, data, tol=DEFAULT, path="<contacts>") -> ContactSet:
    if "points" in data:
        pts = _matrix(data, "points", path)
        if pts.shape != (s.n + 1, s.n):
            raise ParseError(f"{path}: expected {s.n + 1} points of dimension {s.n}")
        return contacts_from_points(s, pts, tol)
    if "barycentric" in data:
        cols = _matrix(data, "barycentric", path)
        return contacts_from_barycentric(s, cols.T, tol)
    raise ParseError(f"{path}: need 'points' or 'barycentric'")


def load_contacts(path, s: Simplex, tol=DEFAULT) -> ContactSet:
    return contacts_from_json(s, _read(path), tol, path)


def coeffs_from_json(data, path="<coeffs>") -> dict:
    try:
        return {(int(e["i"]), int(e["j"])): float(e["t"]) for e in data["coeffs"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: malformed coefficient list ({exc})") from None


def load_coeffs(path) -> dict:
    return coeffs_from_json(_read(path), path)


def coeffs_to_json(coeffs) -> dict:
    return {"coeffs": [{"i": i, "j": j, "t": t} for (i, j), t in sorted(coeffs.items())]}


def load_oracle_config(path) -> OracleConfig:
    return OracleConfig.from_json(_read(path))
