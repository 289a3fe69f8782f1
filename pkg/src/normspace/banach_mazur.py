"""Pullback norms, operator norms and Banach-Mazur distance estimation.

The Banach-Mazur distance between two norms is the infimum of ||T|| ||T^-1||
over linear isomorphisms; equivalently the least mu with B_X inside A B_Y
inside mu B_X for some invertible A.  We estimate it by minimising the
multiplicative grid distance between X and the pullback of Y under A with a
multi-start derivative-free simplex descent over the unit-Frobenius slice of
GL(n) (the objective is dilation-invariant).  The result is an upper bound on
the true distance; dedicated oracles in the test-suite pin the classical
values.  Desk scale: n <= 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .projective import ProjectiveGrid
from .quasinorm import (
    DimensionMismatch,
    Euclidean,
    Lp,
    MaxOf,
    NormSpec,
    Polytope,
    Pullback,
    QuasinormError,
    Scaled,
    WeightedLp,
    evaluate_many,
)
from .metric import _polish_extremum, _grid_spacing, khare_distance

__all__ = [
    "BMResult",
    "LinearMap",
    "bm_distance",
    "operator_norm",
    "pullback",
]

_SINGULAR_PENALTY = 1e9


@dataclass(frozen=True, eq=False)
class LinearMap:
    """Immutable n-by-n real matrix viewed as a linear endomorphism."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=float, copy=True)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or not np.all(np.isfinite(a)):
            raise QuasinormError("linear map must be a finite square matrix")

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    @classmethod
    def identity(cls, n: int) -> "LinearMap":
        return cls(np.eye(n))

    @classmethod
    def rotation(cls, angle: float) -> "LinearMap":
        c, s = math.cos(angle), math.sin(angle)
        return cls(np.array([[c, -s], [s, c]]))

    def is_invertible(self, tol: float = 1e-12) -> bool:
        scale = max(1.0, float(np.linalg.norm(self.entries)) / math.sqrt(self.dim))
        return abs(float(np.linalg.det(self.entries))) > tol * scale**self.dim


def as_matrix(a) -> np.ndarray:
    return a.entries if isinstance(a, LinearMap) else np.asarray(a, dtype=float)


def pullback(a, x: NormSpec) -> NormSpec:
    """The quasinorm whose value at each point is ||A point||_X.

    Requires A invertible.  Pullbacks compose contravariantly:
    pullback(A, pullback(B, X)) evaluates as pullback(B A, X).
    """
    return Pullback(matrix=as_matrix(a), inner=x)


def _certified_norm(spec: NormSpec) -> bool:
    """Structural convexity: True only for families that are norms by form."""
    if isinstance(spec, (Euclidean, Polytope)):
        return True
    if isinstance(spec, (Lp, WeightedLp)):
        return spec.p >= 1.0
    if isinstance(spec, Pullback):
        return _certified_norm(spec.inner)
    if isinstance(spec, Scaled):
        return _certified_norm(spec.inner)
    if isinstance(spec, MaxOf):
        return all(_certified_norm(p) for p in spec.parts)
    return False


def operator_norm(
    a, x: NormSpec, y: NormSpec, grid: ProjectiveGrid, polish: bool = True
) -> float:
    """Norm of the map A from (R^n, X) to (R^n, Y): sup ||Au||_Y / ||u||_X.

    Exact by vertex maximisation when X is a polytope gauge and Y is
    structurally a norm; otherwise a polished grid lower bound.  A need not
    be invertible (operator differences are legal arguments).
    """
    mat = as_matrix(a)
    if x.dim != y.dim or mat.shape != (x.dim, x.dim):
        raise DimensionMismatch("map and specs must share one dimension")
    if isinstance(x, Polytope) and _certified_norm(y):
        verts = x.ball.vertices
        return float(np.max(evaluate_many(y, verts @ mat.T)))
    pts = grid.matrix

    def ratio(p: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(evaluate_many(y, p @ mat.T)) - x._log_gauge_many(p)

    vals = ratio(pts)
    best = int(np.argmax(vals))
    center, val = grid.points[best], float(vals[best])
    if polish:
        center, val = _polish_extremum(ratio, center, val, _grid_spacing(grid), +1.0)
    return math.exp(val)


@dataclass(frozen=True)
class BMResult:
    """Banach-Mazur estimate: the best map found and its distance value."""

    distance: float
    best_map: LinearMap
    starts_used: int
    converged: bool


def _fro_normalized(mat: np.ndarray) -> np.ndarray:
    return mat / np.linalg.norm(mat)


def bm_distance(
    x: NormSpec,
    y: NormSpec,
    grid: ProjectiveGrid,
    starts: int = 16,
    budget: int = 2000,
    seed: int = 0,
) -> BMResult:
    """Upper bound for the Banach-Mazur distance between two norm classes.

    Minimises the multiplicative grid distance between X and the pullback of
    Y over GL(n) by Nelder-Mead descent from `starts` seeded starting maps
    (identity first, then random orthogonal-times-diagonal factors), each
    start capped at `budget` objective evaluations.  Candidates are
    renormalised to unit Frobenius scale (the objective is invariant under
    dilations of the map).  Deterministic for a fixed seed; ties between
    starts break toward lexicographically smallest matrix entries.
    """
    n = x.dim
    if y.dim != n or grid.dim != n:
        raise DimensionMismatch("specs and grid must share one dimension")
    if n > 4:
        raise QuasinormError("desk-scale search supports n <= 4 only")
    if starts < 1:
        raise QuasinormError("starts must be at least 1")
    pts = grid.matrix
    log_x = x._log_gauge_many(pts)
    spacing = _grid_spacing(grid)

    def objective(flat: np.ndarray) -> float:
        # Polishing the two extremes keeps the value an honest estimate:
        # a raw grid range under-reads maps whose extremes fall between grid
        # directions, which the descent would otherwise exploit.
        mat = flat.reshape(n, n)
        fro = float(np.linalg.norm(mat))
        if not np.isfinite(fro) or fro < 1e-12:
            return _SINGULAR_PENALTY
        mat = mat / fro
        if abs(float(np.linalg.det(mat))) < 1e-9:
            return _SINGULAR_PENALTY

        def rfun(p: np.ndarray) -> np.ndarray:
            with np.errstate(divide="ignore"):
                return x._log_gauge_many(p) - np.log(evaluate_many(y, p @ mat.T))

        r = rfun(pts)
        hi_i = int(np.argmax(r))
        lo_i = int(np.argmin(r))
        _, hi = _polish_extremum(
            rfun, grid.points[hi_i], float(r[hi_i]), spacing, +1.0, budget=48
        )
        _, lo = _polish_extremum(
            rfun, grid.points[lo_i], float(r[lo_i]), spacing, -1.0, budget=48
        )
        return hi - lo

    start_maps = [np.eye(n)]
    for k in range(1, starts):
        rng = np.random.default_rng([abs(int(seed)), k])
        q, r = np.linalg.qr(rng.normal(size=(n, n)))
        q = q * np.sign(np.diag(r))
        d = np.exp(rng.uniform(-math.log(3.0), math.log(3.0), size=n))
        start_maps.append(q @ np.diag(d))

    best_val = math.inf
    best_mat = np.eye(n)
    converged = False
    for mat0 in start_maps:
        res = minimize(
            objective,
            _fro_normalized(mat0).ravel(),
            method="Nelder-Mead",
            options={
                "maxfev": budget,
                "xatol": 1e-8,
                "fatol": 1e-12,
                "adaptive": n > 2,
            },
        )
        val = float(res.fun)
        cand = _fro_normalized(res.x.reshape(n, n))
        if val < best_val - 1e-12:
            best_val, best_mat = val, cand
        elif abs(val - best_val) <= 1e-12:
            if tuple(cand.ravel()) < tuple(best_mat.ravel()):
                best_mat = cand
        converged = converged or bool(res.success)

    witness = khare_distance(x, pullback(best_mat, y), grid, polish=True)
    return BMResult(
        distance=witness.mu,
        best_map=LinearMap(best_mat),
        starts_used=len(start_maps),
        converged=converged,
    )
