"""JSON interchange for norm specs.

Files carry a top-level ``"schema": 1`` marker and a spec object tagged by
``"family"``; vectors and matrices are plain JSON arrays of numbers.  Floats
are emitted with Python's shortest round-trip repr, so a written spec parses
back to bit-identical values and evaluates bit-for-bit like the original.
``p`` accepts the string "inf" for the max-norm.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .projective import Direction, ProjectiveGrid
from .quasinorm import (
    Euclidean,
    Interp,
    Lp,
    MaxOf,
    NormSpec,
    Opposite,
    Polytope,
    Profile,
    Pullback,
    Scaled,
    WeightedLp,
    ball_from_vertices,
)

__all__ = ["SchemaError", "dump_spec", "load_spec", "spec_from_dict", "spec_to_dict"]

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    """Norm-spec JSON does not match the schema; `path` locates the field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _p_out(p: float):
    return "inf" if math.isinf(p) else float(p)


def _p_in(raw, path: str) -> float:
    if isinstance(raw, str):
        if raw.lower() in ("inf", "infinity"):
            return math.inf
        raise SchemaError(path, f"unrecognised p value {raw!r}")
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return float(raw)
    raise SchemaError(path, "p must be a number or 'inf'")


def _vector_in(raw, path: str) -> np.ndarray:
    if not isinstance(raw, list) or not raw or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw
    ):
        raise SchemaError(path, "expected a nonempty array of numbers")
    return np.array(raw, dtype=float)


def _matrix_in(raw, path: str) -> np.ndarray:
    if not isinstance(raw, list) or not raw:
        raise SchemaError(path, "expected a nonempty array of rows")
    rows = [_vector_in(r, f"{path}[{i}]") for i, r in enumerate(raw)]
    if len({r.shape[0] for r in rows}) != 1:
        raise SchemaError(path, "rows have inconsistent lengths")
    return np.array(rows)


def _dim_in(raw, path: str) -> int:
    if not isinstance(raw, int) or isinstance(raw, bool) or raw < 2:
        raise SchemaError(path, "dim must be an integer >= 2")
    return raw


def spec_to_dict(spec: NormSpec) -> dict:
    """Plain-JSON representation of a spec (without the schema marker)."""
    if isinstance(spec, Euclidean):
        return {"family": "euclidean", "dim": spec.n}
    if isinstance(spec, WeightedLp):
        return {
            "family": "weighted_lp",
            "dim": spec.n,
            "p": _p_out(spec.p),
            "weights": [float(w) for w in spec.weights],
        }
    if isinstance(spec, Lp):
        return {"family": "lp", "dim": spec.n, "p": _p_out(spec.p)}
    if isinstance(spec, Polytope):
        return {
            "family": "polytope",
            "dim": spec.ball.dim,
            "vertices": [[float(c) for c in v] for v in spec.ball.vertices],
        }
    if isinstance(spec, Profile):
        return {
            "family": "profile",
            "dim": spec.dim,
            "grid": {
                "dim": spec.grid.dim,
                "resolution": spec.grid.resolution,
                "seed": spec.grid.seed,
                "points": [[float(c) for c in p.coords] for p in spec.grid.points],
            },
            "logvalues": [float(v) for v in spec.logvalues],
        }
    if isinstance(spec, Pullback):
        return {
            "family": "pullback",
            "matrix": [[float(c) for c in row] for row in spec.matrix],
            "inner": spec_to_dict(spec.inner),
        }
    if isinstance(spec, Interp):
        return {
            "family": "interp",
            "theta": float(spec.theta),
            "left": spec_to_dict(spec.left),
            "right": spec_to_dict(spec.right),
        }
    if isinstance(spec, Opposite):
        return {"family": "opposite", "inner": spec_to_dict(spec.inner)}
    if isinstance(spec, Scaled):
        return {"family": "scaled", "c": float(spec.c), "inner": spec_to_dict(spec.inner)}
    if isinstance(spec, MaxOf):
        return {"family": "max", "parts": [spec_to_dict(p) for p in spec.parts]}
    raise SchemaError("$", f"unknown spec type {type(spec).__name__}")


def spec_from_dict(data, path: str = "$") -> NormSpec:
    """Parse a spec object, raising SchemaError with the offending path."""
    if not isinstance(data, dict):
        raise SchemaError(path, "expected an object")
    family = data.get("family")
    if not isinstance(family, str):
        raise SchemaError(f"{path}.family", "missing or non-string family tag")
    try:
        if family == "euclidean":
            return Euclidean(n=_dim_in(data.get("dim"), f"{path}.dim"))
        if family == "lp":
            return Lp(
                n=_dim_in(data.get("dim"), f"{path}.dim"),
                p=_p_in(data.get("p"), f"{path}.p"),
            )
        if family == "weighted_lp":
            return WeightedLp(
                n=_dim_in(data.get("dim"), f"{path}.dim"),
                p=_p_in(data.get("p"), f"{path}.p"),
                weights=_vector_in(data.get("weights"), f"{path}.weights"),
            )
        if family == "polytope":
            dim = _dim_in(data.get("dim"), f"{path}.dim")
            verts = _matrix_in(data.get("vertices"), f"{path}.vertices")
            if verts.shape[1] != dim:
                raise SchemaError(f"{path}.vertices", "vertex length differs from dim")
            return Polytope(ball=ball_from_vertices(verts))
        if family == "profile":
            gd = data.get("grid")
            if not isinstance(gd, dict):
                raise SchemaError(f"{path}.grid", "expected an object")
            dim = _dim_in(gd.get("dim"), f"{path}.grid.dim")
            pts = _matrix_in(gd.get("points"), f"{path}.grid.points")
            if pts.shape[1] != dim:
                raise SchemaError(f"{path}.grid.points", "point length differs from dim")
            resolution = gd.get("resolution", pts.shape[0])
            seed = gd.get("seed", 0)
            if not isinstance(resolution, int) or not isinstance(seed, int):
                raise SchemaError(f"{path}.grid", "resolution and seed must be integers")
            grid = ProjectiveGrid(
                dim=dim,
                points=tuple(Direction(row) for row in pts),
                resolution=resolution,
                seed=seed,
            )
            vals = _vector_in(data.get("logvalues"), f"{path}.logvalues")
            if not np.all(np.isfinite(vals)):
                raise SchemaError(f"{path}.logvalues", "values must be finite")
            return Profile(grid=grid, logvalues=vals)
        if family == "pullback":
            return Pullback(
                matrix=_matrix_in(data.get("matrix"), f"{path}.matrix"),
                inner=spec_from_dict(data.get("inner"), f"{path}.inner"),
            )
        if family == "interp":
            theta = data.get("theta")
            if not isinstance(theta, (int, float)) or isinstance(theta, bool):
                raise SchemaError(f"{path}.theta", "theta must be a number")
            return Interp(
                left=spec_from_dict(data.get("left"), f"{path}.left"),
                right=spec_from_dict(data.get("right"), f"{path}.right"),
                theta=float(theta),
            )
        if family == "opposite":
            return Opposite(inner=spec_from_dict(data.get("inner"), f"{path}.inner"))
        if family == "scaled":
            c = data.get("c")
            if not isinstance(c, (int, float)) or isinstance(c, bool):
                raise SchemaError(f"{path}.c", "c must be a number")
            return Scaled(c=float(c), inner=spec_from_dict(data.get("inner"),
                                                           f"{path}.inner"))
        if family == "max":
            parts = data.get("parts")
            if not isinstance(parts, list) or not parts:
                raise SchemaError(f"{path}.parts", "expected a nonempty array")
            return MaxOf(
                parts=tuple(
                    spec_from_dict(p, f"{path}.parts[{i}]") for i, p in enumerate(parts)
                )
            )
    except SchemaError:
        raise
    except (ValueError, TypeError) as exc:
        raise SchemaError(path, str(exc)) from exc
    raise SchemaError(f"{path}.family", f"unknown family {family!r}")


def dump_spec(spec: NormSpec, path) -> None:
    """Write a spec file with the schema marker."""
    payload = {"schema": SCHEMA_VERSION, **spec_to_dict(spec)}
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def load_spec(path) -> NormSpec:
    """Read and validate a spec file."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise SchemaError("$", "expected a top-level object")
    if data.get("schema") != SCHEMA_VERSION:
        raise SchemaError("$.schema", f"expected schema {SCHEMA_VERSION}")
    return spec_from_dict(data)
