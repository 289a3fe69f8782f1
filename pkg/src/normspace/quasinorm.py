"""Symbolic quasinorms on R^n and polytope unit balls.

A quasinorm here is a continuous, absolutely homogeneous map that is strictly
positive away from the origin and satisfies a relaxed triangle inequality
||x+y|| <= k(||x|| + ||y||).  Rather than storing raw function values, specs
form a closed algebra (p-norms, weighted p-norms, polytope gauges, sampled
profiles, pullbacks by invertible matrices, geometric-mean interpolation,
opposites, dilations and pointwise maxima), so class-level identities can be
checked grid-exactly downstream.

Polytope balls carry both vertices and facet normals; the gauge is evaluated
as the maximum of the facet functionals and agrees with hull-membership
bisection.  Convexity checks here are sampling refutations, not decision
procedures: a "norm" verdict means no counterexample was found.
"""

from __future__ import annotations

import itertools
import math
import weakref
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError

from .projective import (
    Direction,
    ProjectiveGrid,
    basis_vector,
    canonicalize,
    geodesic_distance,
)

__all__ = [
    "BallValidationError",
    "BallValidationReport",
    "DimensionMismatch",
    "Euclidean",
    "Interp",
    "Lp",
    "MaxOf",
    "NormSpec",
    "Opposite",
    "Polytope",
    "PolytopeBall",
    "Profile",
    "Pullback",
    "QuasinormError",
    "Scaled",
    "WeightedLp",
    "ball_from_vertices",
    "evaluate",
    "evaluate_many",
    "extreme_points",
    "is_exposed",
    "is_norm",
    "minkowski_functional",
    "polyhedral_approx",
    "quasinorm_constant",
    "validate_ball",
]

MAX_BALL_VERTICES = 512

# Geometric predicates at 1e-9, pure arithmetic identities at 1e-12.
GEOM_TOL = 1e-9


class QuasinormError(ValueError):
    """Invalid quasinorm construction or argument."""


class DimensionMismatch(QuasinormError):
    """Operands live in different ambient dimensions."""


class BallValidationError(QuasinormError):
    """A candidate unit ball fails one of the gauge requirements.

    `clause` names the violated requirement: "balanced", "interior"
    (origin not strictly interior / not full-dimensional) or "bounded".
    """

    def __init__(self, clause: str, message: str):
        super().__init__(message)
        self.clause = clause


# ---------------------------------------------------------------------------
# polytope balls


@dataclass(frozen=True, eq=False)
class PolytopeBall:
    """Balanced polytope unit ball with vertex and facet data.

    Facets are stored as offset-1 normals: the ball is
    {x : <a_j, x> <= 1 for all j} and the gauge is max_j <a_j, x>.
    """

    dim: int
    vertices: np.ndarray  # (k, dim)
    facets: np.ndarray  # (f, dim) offset-1 normals

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float, copy=True)
        f = np.array(self.facets, dtype=float, copy=True)
        v.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "facets", f)


_VALIDATED: "weakref.WeakSet[PolytopeBall]" = weakref.WeakSet()


def _hull_facets(vertices: np.ndarray) -> np.ndarray:
    """Offset-1 facet normals of conv(vertices), origin strictly interior."""
    try:
        hull = ConvexHull(vertices)
    except QhullError as exc:
        raise BallValidationError(
            "interior",
            "origin not interior / not full-dimensional: " + str(exc).splitlines()[0],
        ) from exc
    eqs = hull.equations  # rows (a, b) with a.x + b <= 0
    offs = -eqs[:, -1]
    if np.any(offs <= 1e-12):
        raise BallValidationError(
            "interior", "origin not interior / not full-dimensional"
        )
    return eqs[:, :-1] / offs[:, None]


def _check_balanced(vertices: np.ndarray, tol: float = GEOM_TOL) -> bool:
    for v in vertices:
        gap = np.linalg.norm(vertices + v, axis=1).min()
        if gap > tol * max(1.0, float(np.linalg.norm(v))):
            return False
    return True


def ball_from_vertices(vertices, max_vertices: int = MAX_BALL_VERTICES) -> PolytopeBall:
    """Build a validated polytope ball from its vertex list.

    The vertex set must be balanced (closed under negation) and span R^n with
    the origin strictly interior.  Exact duplicate rows are dropped; the
    remaining order is preserved.
    """
    arr = np.asarray(vertices, dtype=float)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise QuasinormError("vertices must form a nonempty (k, n) array")
    if not np.all(np.isfinite(arr)):
        raise QuasinormError("vertices must be finite")
    seen: set[bytes] = set()
    rows = []
    for row in arr:
        key = row.tobytes()
        if key not in seen:
            seen.add(key)
            rows.append(row)
    arr = np.array(rows)
    if arr.shape[0] > max_vertices:
        raise QuasinormError(
            f"vertex count {arr.shape[0]} exceeds the cap of {max_vertices}; "
            "reduce the grid or raise max_vertices"
        )
    if not _check_balanced(arr):
        raise BallValidationError("balanced", "vertex set is not balanced")
    facets = _hull_facets(arr)
    ball = PolytopeBall(dim=arr.shape[1], vertices=arr, facets=facets)
    _VALIDATED.add(ball)
    return ball


@dataclass(frozen=True)
class BallValidationReport:
    """Euclidean sandwich constants and structural flags of a valid ball."""

    eps: float  # largest epsilon with eps*B2 inside the ball
    M: float  # smallest found M with the ball inside M*B2
    balanced: bool
    midpoint_convex: bool


def validate_ball(ball: PolytopeBall) -> BallValidationReport:
    """Check the gauge requirements and report the Euclidean sandwich.

    Raises BallValidationError naming the violated clause when the vertex set
    is not balanced, or the polytope is not full-dimensional with the origin
    strictly interior.
    """
    arr = np.asarray(ball.vertices, dtype=float)
    if arr.ndim != 2 or arr.shape[0] == 0 or not np.all(np.isfinite(arr)):
        raise BallValidationError("bounded", "vertex set empty or not finite")
    if not _check_balanced(arr):
        raise BallValidationError("balanced", "vertex set is not balanced")
    facets = np.asarray(ball.facets, dtype=float)
    if facets.size == 0:
        facets = _hull_facets(arr)  # raises "interior" when degenerate
    if np.linalg.matrix_rank(arr) < ball.dim:
        raise BallValidationError(
            "interior", "origin not interior / not full-dimensional"
        )
    eps = 1.0 / float(np.linalg.norm(facets, axis=1).max())
    M = float(np.linalg.norm(arr, axis=1).max())
    _VALIDATED.add(ball)
    return BallValidationReport(eps=eps, M=M, balanced=True, midpoint_convex=True)


def _ensure_valid(ball: PolytopeBall) -> None:
    if ball not in _VALIDATED:
        validate_ball(ball)


def _gauge_many(ball: PolytopeBall, pts: np.ndarray) -> np.ndarray:
    return np.max(pts @ ball.facets.T, axis=1)


def minkowski_functional(ball: PolytopeBall, x) -> float:
    """Gauge of the ball at x: inf{ lam > 0 : x in lam * ball }.

    Computed as the maximum of the offset-1 facet functionals; agrees with
    hull-membership bisection within 1e-9.
    """
    _ensure_valid(ball)
    arr = np.asarray(x, dtype=float)
    if arr.shape != (ball.dim,):
        raise DimensionMismatch("point dimension does not match the ball")
    return float(_gauge_many(ball, arr[None, :])[0])


def extreme_points(ball: PolytopeBall) -> list[np.ndarray]:
    """Minimal sublist of stored vertices whose hull is the ball.

    A vertex is kept iff it is not a convex combination of the others
    (checked by a small linear feasibility solve).
    """
    _ensure_valid(ball)
    verts = ball.vertices
    keep: list[np.ndarray] = []
    for i, v in enumerate(verts):
        others = np.delete(verts, i, axis=0)
        a_eq = np.vstack([others.T, np.ones(others.shape[0])])
        b_eq = np.concatenate([v, [1.0]])
        res = linprog(
            c=np.zeros(others.shape[0]),
            A_eq=a_eq,
            b_eq=b_eq,
            bounds=(0, None),
            method="highs",
        )
        if not res.success:
            keep.append(np.array(v))
    return keep


def is_exposed(ball: PolytopeBall, v) -> tuple[bool, np.ndarray | None]:
    """Whether a boundary point is exposed, with a witnessing functional.

    Returns (True, f) with <f, v> = 1 and <f, w> < 1 for every other vertex,
    or (False, None).  For polytopes, exposed and extreme coincide.
    """
    _ensure_valid(ball)
    arr = np.asarray(v, dtype=float)
    if arr.shape != (ball.dim,):
        raise DimensionMismatch("point dimension does not match the ball")
    if abs(minkowski_functional(ball, arr) - 1.0) > GEOM_TOL:
        raise QuasinormError("point is not on the boundary of the ball")
    scale = float(np.linalg.norm(arr))
    others = [
        w
        for w in ball.vertices
        if np.linalg.norm(w - arr) > GEOM_TOL * max(1.0, scale)
    ]
    if not others:
        return True, arr / float(arr @ arr)
    others = np.array(others)
    n = ball.dim
    # Variables (f, gamma): maximize gamma subject to <f, v> = 1 and
    # <f, w> <= 1 - gamma for the other vertices.
    c = np.zeros(n + 1)
    c[-1] = -1.0
    a_ub = np.hstack([others, np.ones((others.shape[0], 1))])
    b_ub = np.ones(others.shape[0])
    a_eq = np.concatenate([arr, [0.0]])[None, :]
    b_eq = np.array([1.0])
    bounds = [(-1e9, 1e9)] * n + [(-4.0, 4.0)]
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds,
                  method="highs")
    if not res.success:
        return False, None
    gamma = float(res.x[-1])
    if gamma <= GEOM_TOL:
        return False, None
    return True, np.array(res.x[:-1])


# ---------------------------------------------------------------------------
# norm specs


@dataclass(frozen=True, eq=False)
class NormSpec:
    """Base of the closed symbolic algebra of continuous quasinorms."""

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def _eval_many(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _log_gauge_many(self, units: np.ndarray) -> np.ndarray:
        """Log of the value at canonical unit rows (assumed |u|_2 = 1)."""
        return np.log(self._eval_many(units))


@dataclass(frozen=True, eq=False)
class Euclidean(NormSpec):
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise QuasinormError("dimension must be at least 2")

    @property
    def dim(self) -> int:
        return self.n

    def _eval_many(self, pts):
        return np.linalg.norm(pts, axis=1)

    def _log_gauge_many(self, units):
        return np.zeros(units.shape[0])


@dataclass(frozen=True, eq=False)
class Lp(NormSpec):
    """p-norm for p >= 1, p-quasinorm for 0 < p < 1, max-norm at p = inf."""

    n: int
    p: float

    def __post_init__(self):
        if self.n < 2:
            raise QuasinormError("dimension must be at least 2")
        if not (self.p > 0):
            raise QuasinormError("p must be positive (p = inf allowed)")

    @property
    def dim(self) -> int:
        return self.n

    def _eval_many(self, pts):
        a = np.abs(pts)
        if math.isinf(self.p):
            return a.max(axis=1)
        if self.p == 1.0:
            return a.sum(axis=1)
        if self.p == 2.0:
            return np.linalg.norm(pts, axis=1)
        return np.power(np.power(a, self.p).sum(axis=1), 1.0 / self.p)


@dataclass(frozen=True, eq=False)
class WeightedLp(NormSpec):
    """p-functional of the coordinatewise rescaled vector (w_i |x_i|)."""

    n: int
    p: float
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float, copy=True)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if self.n < 2:
            raise QuasinormError("dimension must be at least 2")
        if not (self.p > 0):
            raise QuasinormError("p must be positive (p = inf allowed)")
        if w.shape != (self.n,) or not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise QuasinormError("weights must be positive, finite, length n")

    @property
    def dim(self) -> int:
        return self.n

    def _eval_many(self, pts):
        a = np.abs(pts) * self.weights
        if math.isinf(self.p):
            return a.max(axis=1)
        if self.p == 1.0:
            return a.sum(axis=1)
        return np.power(np.power(a, self.p).sum(axis=1), 1.0 / self.p)


@dataclass(frozen=True, eq=False)
class Polytope(NormSpec):
    """Gauge of a balanced polytope unit ball."""

    ball: PolytopeBall

    @property
    def dim(self) -> int:
        return self.ball.dim

    def _eval_many(self, pts):
        return _gauge_many(self.ball, pts)


@dataclass(frozen=True, eq=False)
class Profile(NormSpec):
    """Quasinorm given by log-values sampled on a projective grid.

    Evaluation at the grid directions reproduces exp(logvalues) exactly.
    Off-grid directions use a blended nearest-neighbour extension (linear in
    angle for n=2, inverse-geodesic blend of the 3 nearest grid directions
    otherwise); the extension is representation-dependent and documented as
    such, since class-level computations only ever read grid values.
    """

    grid: ProjectiveGrid
    logvalues: np.ndarray

    def __post_init__(self):
        v = np.array(self.logvalues, dtype=float, copy=True)
        v.setflags(write=False)
        object.__setattr__(self, "logvalues", v)
        if v.shape != (len(self.grid),):
            raise QuasinormError("logvalues length must match the grid")
        if not np.all(np.isfinite(v)):
            raise QuasinormError("profile log-values must be finite")

    @property
    def dim(self) -> int:
        return self.grid.dim

    @cached_property
    def _index(self) -> dict[bytes, int]:
        return {p.coords.tobytes(): i for i, p in enumerate(self.grid.points)}

    @cached_property
    def _angles(self) -> tuple[np.ndarray, np.ndarray]:
        # n=2 only: grid angles in [0, pi) sorted, with matching values.
        m = self.grid.matrix
        ang = np.mod(np.arctan2(m[:, 1], m[:, 0]), np.pi)
        order = np.argsort(ang, kind="stable")
        return ang[order], self.logvalues[order]

    def _sphere_log(self, u: Direction) -> float:
        idx = self._index.get(u.coords.tobytes())
        if idx is not None:
            return float(self.logvalues[idx])
        if self.dim == 2:
            ang, vals = self._angles
            phi = float(np.mod(math.atan2(u.coords[1], u.coords[0]), np.pi))
            j = int(np.searchsorted(ang, phi))
            lo = (j - 1) % len(ang)
            hi = j % len(ang)
            a_lo, a_hi = float(ang[lo]), float(ang[hi])
            span = (a_hi - a_lo) % np.pi
            if span == 0.0:
                return float(vals[hi])
            t = ((phi - a_lo) % np.pi) / span
            return float((1.0 - t) * vals[lo] + t * vals[hi])
        dots = np.clip(np.abs(self.grid.matrix @ u.coords), 0.0, 1.0)
        dist = np.arccos(dots)
        nearest = np.argsort(dist, kind="stable")[:3]
        d = dist[nearest]
        if d[0] < 1e-12:
            return float(self.logvalues[nearest[0]])
        w = 1.0 / d
        w /= w.sum()
        return float(w @ self.logvalues[nearest])

    def _eval_many(self, pts):
        out = np.empty(pts.shape[0])
        for i, row in enumerate(pts):
            if not np.any(row):
                out[i] = 0.0
                continue
            u = canonicalize(row)
            lam = float(np.linalg.norm(row)) / float(np.linalg.norm(u.coords))
            out[i] = lam * math.exp(self._sphere_log(u))
        return out

    def _log_gauge_many(self, units):
        if np.array_equal(units, self.grid.matrix):
            return self.logvalues.copy()
        return np.array([self._sphere_log(canonicalize(row)) for row in units])


@dataclass(frozen=True, eq=False)
class Pullback(NormSpec):
    """x -> inner(A x) for an invertible matrix A."""

    matrix: np.ndarray
    inner: NormSpec

    def __post_init__(self):
        a = np.array(self.matrix, dtype=float, copy=True)
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)
        n = self.inner.dim
        if a.shape != (n, n) or not np.all(np.isfinite(a)):
            raise QuasinormError("pullback matrix must be a finite n-by-n array")
        scale = max(1.0, float(np.linalg.norm(a)) / math.sqrt(n))
        if abs(float(np.linalg.det(a))) <= 1e-12 * scale**n:
            raise QuasinormError("pullback matrix is singular")

    @property
    def dim(self) -> int:
        return self.inner.dim

    def _eval_many(self, pts):
        return self.inner._eval_many(pts @ self.matrix.T)


@dataclass(frozen=True, eq=False)
class Interp(NormSpec):
    """Pointwise geometric mean left^theta * right^(1-theta).

    theta in [0, 1] is interpolation proper; other finite values arise from
    the scalar action on classes and are permitted here.
    """

    left: NormSpec
    right: NormSpec
    theta: float

    def __post_init__(self):
        if self.left.dim != self.right.dim:
            raise DimensionMismatch("interpolands live in different dimensions")
        if not np.isfinite(self.theta):
            raise QuasinormError("theta must be finite")

    @property
    def dim(self) -> int:
        return self.left.dim

    def _eval_many(self, pts):
        lx = self.left._eval_many(pts)
        rx = self.right._eval_many(pts)
        return np.power(lx, self.theta) * np.power(rx, 1.0 - self.theta)

    def _log_gauge_many(self, units):
        return self.theta * self.left._log_gauge_many(units) + (
            1.0 - self.theta
        ) * self.right._log_gauge_many(units)


@dataclass(frozen=True, eq=False)
class Opposite(NormSpec):
    """x -> |x|_2^2 / inner(x) away from 0 (and 0 at 0)."""

    inner: NormSpec

    @property
    def dim(self) -> int:
        return self.inner.dim

    def _eval_many(self, pts):
        sq = np.einsum("ij,ij->i", pts, pts)
        return sq / self.inner._eval_many(pts)

    def _log_gauge_many(self, units):
        return -self.inner._log_gauge_many(units)


@dataclass(frozen=True, eq=False)
class Scaled(NormSpec):
    """Dilation c * inner for c > 0; the same class as inner."""

    c: float
    inner: NormSpec

    def __post_init__(self):
        if not (np.isfinite(self.c) and self.c > 0):
            raise QuasinormError("scale factor must be positive and finite")

    @property
    def dim(self) -> int:
        return self.inner.dim

    def _eval_many(self, pts):
        return self.c * self.inner._eval_many(pts)

    def _log_gauge_many(self, units):
        return math.log(self.c) + self.inner._log_gauge_many(units)


@dataclass(frozen=True, eq=False)
class MaxOf(NormSpec):
    """Pointwise maximum of finitely many quasinorms."""

    parts: tuple[NormSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise QuasinormError("max requires at least one part")
        if len({p.dim for p in self.parts}) != 1:
            raise DimensionMismatch("max parts live in different dimensions")

    @property
    def dim(self) -> int:
        return self.parts[0].dim

    def _eval_many(self, pts):
        return np.maximum.reduce([p._eval_many(pts) for p in self.parts])

    def _log_gauge_many(self, units):
        return np.maximum.reduce([p._log_gauge_many(units) for p in self.parts])


# ---------------------------------------------------------------------------
# evaluation entry points


def evaluate_many(spec: NormSpec, pts) -> np.ndarray:
    """Values of the quasinorm at the rows of pts (zero rows give 0)."""
    arr = np.asarray(pts, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != spec.dim:
        raise DimensionMismatch(
            f"points must be (k, {spec.dim}); got shape {arr.shape}"
        )
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = spec._eval_many(arr)
    zero = ~np.any(arr, axis=1)
    if np.any(zero):
        vals = np.where(zero, 0.0, vals)
    return vals


def evaluate(spec: NormSpec, x) -> float:
    """Value of the quasinorm at a single vector."""
    arr = np.asarray(x, dtype=float)
    if arr.shape != (spec.dim,):
        raise DimensionMismatch(
            f"point must have length {spec.dim}; got shape {arr.shape}"
        )
    return float(evaluate_many(spec, arr[None, :])[0])


def log_gauge_values(spec: NormSpec, grid: ProjectiveGrid) -> np.ndarray:
    """Log of the quasinorm at every grid direction (the raw log-profile)."""
    if spec.dim != grid.dim:
        raise DimensionMismatch("spec and grid dimensions differ")
    return spec._log_gauge_many(grid.matrix)


# ---------------------------------------------------------------------------
# convexity diagnostics


def _pair_samples(
    n: int, grid: ProjectiveGrid, pairs: int, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic battery of basis pairs followed by seeded grid pairs."""
    xs: list[np.ndarray] = []
    ys: list[np.ndarray] = []
    e = np.eye(n)
    xs.append(e[0])
    ys.append(e[0])  # parallel pair: ratio exactly 1 for every quasinorm
    for i, j in itertools.combinations(range(n), 2):
        xs.append(e[i])
        ys.append(e[j])
        xs.append(e[i])
        ys.append(-e[j])
    battery = min(len(xs), pairs)
    xs, ys = xs[:battery], ys[:battery]
    remaining = pairs - battery
    if remaining > 0:
        rng = np.random.default_rng([seed, len(grid)])
        m = grid.matrix
        i = rng.integers(0, m.shape[0], size=remaining)
        j = rng.integers(0, m.shape[0], size=remaining)
        sign = rng.choice([-1.0, 1.0], size=remaining)
        t = rng.uniform(0.05, 0.95, size=remaining)
        xs = np.vstack([np.array(xs), m[i] * t[:, None]])
        ys = np.vstack([np.array(ys), m[j] * (sign * (1.0 - t))[:, None]])
    else:
        xs, ys = np.array(xs), np.array(ys)
    return xs, ys


def quasinorm_constant(
    spec: NormSpec, grid: ProjectiveGrid, pairs: int = 2000, seed: int = 0
) -> float:
    """Sampled lower bound for the best relaxed-triangle constant k.

    Returns the maximum of ||x+y|| / (||x|| + ||y||) over the sample; this is
    a certified lower bound for the optimal k and equals 1 (within 1e-9) when
    the spec is a norm.
    """
    if pairs < 1:
        raise QuasinormError("pairs must be at least 1")
    xs, ys = _pair_samples(spec.dim, grid, pairs, seed)
    num = evaluate_many(spec, xs + ys)
    den = evaluate_many(spec, xs) + evaluate_many(spec, ys)
    # k >= 1 always holds (take y = x), so the clamp keeps the bound certified.
    return max(1.0, float(np.max(num / den)))


def is_norm(
    spec: NormSpec,
    grid: ProjectiveGrid,
    pairs: int = 2000,
    seed: int = 0,
    tol: float = GEOM_TOL,
) -> tuple[bool, tuple[np.ndarray, np.ndarray] | None]:
    """Sampling refutation of the triangle inequality.

    Returns (False, (x, y)) for the first sampled pair violating
    ||x+y|| <= ||x|| + ||y|| by more than tol.  (True, None) means no
    counterexample was found at this sampling -- a one-sided verdict.
    """
    if not (tol > 0):
        raise QuasinormError("tol must be positive")
    xs, ys = _pair_samples(spec.dim, grid, pairs, seed)
    num = evaluate_many(spec, xs + ys)
    den = evaluate_many(spec, xs) + evaluate_many(spec, ys)
    bad = np.flatnonzero(num > den + tol)
    if bad.size:
        k = int(bad[0])
        return False, (np.array(xs[k]), np.array(ys[k]))
    return True, None


def polyhedral_approx(
    spec: NormSpec,
    grid: ProjectiveGrid,
    max_vertices: int = MAX_BALL_VERTICES,
    seed: int = 0,
) -> PolytopeBall:
    """Inscribed polytope ball through the spec's sphere at grid directions.

    Vertices are u / ||u|| and their negations for grid directions u, so the
    hull is contained in the spec's ball and the approximate gauge dominates
    the spec pointwise.  Multiplicative distance to the spec decreases
    monotonically under grid refinement.  Requires a convex ball: a sampling
    norm check runs first.
    """
    ok, _ = is_norm(spec, grid, pairs=min(2000, 4 * len(grid)), seed=seed)
    if not ok:
        raise QuasinormError("polyhedral approximation requires a convex ball")
    u = grid.matrix
    vals = evaluate_many(spec, u)
    verts = u / vals[:, None]
    return ball_from_vertices(np.vstack([verts, -verts]), max_vertices=max_vertices)
