"""Multiplicative distance between quasinorm classes and its additive model.

The distance between two quasinorms is the least mu admitting a dilation
lambda with ||.||_X <= lambda ||.||_Y <= mu ||.||_X; it only depends on the
classes modulo dilation and is always attained at a pair of touching
directions.  On a finite grid the computation is the range (max minus min) of
the log-ratio r(u) = log ||u||_X - log ||u||_Y, which is a certified lower
bound for the continuum value; optional polishing runs a bounded
derivative-free ascent around each witness and can only increase the bound.

Log-profiles realise the isometric model: a class corresponds to a function
on the projective grid modulo additive constants, and the range metric on
profiles equals the log of the multiplicative distance, grid-exactly.
Logs are base e internally; the class norm converts with log2 at the
boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from scipy.linalg import null_space
from scipy.stats import norm as _gaussian
from scipy.stats import qmc

from .projective import (
    Direction,
    ProjectiveGrid,
    basis_vector,
    canonicalize,
)
from .quasinorm import (
    DimensionMismatch,
    Euclidean,
    NormSpec,
    Profile,
    QuasinormError,
)

__all__ = [
    "LogProfile",
    "MetricAxiomsReport",
    "MetricWitness",
    "from_log_profile",
    "khare_distance",
    "metric_axioms_report",
    "range_metric",
    "to_log_profile",
    "triple_norm",
]

POLISH_MIN_GAIN = 1e-10
POLISH_BUDGET = 200


@dataclass(frozen=True)
class MetricWitness:
    """Multiplicative distance plus the data that attains it.

    mu >= 1 is the distance, lam the dilation; at argmax_dir the ratio
    ||u||_X / ||u||_Y equals lam, at argmin_dir it equals lam / mu (both
    within 1e-9 relative).
    """

    mu: float
    lam: float
    argmax_dir: Direction
    argmin_dir: Direction
    grid_size: int
    refined: bool


@dataclass(frozen=True)
class LogProfile:
    """Sampled log of a quasinorm on the grid; the additive model of a class.

    When normalized, the entry at e1 is exactly 0, matching the choice of the
    representative with value 1 at e1.
    """

    grid: ProjectiveGrid
    values: np.ndarray
    normalized: bool

    def __post_init__(self):
        v = np.array(self.values, dtype=float, copy=True)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if v.shape != (len(self.grid),):
            raise QuasinormError("profile length must match the grid")
        if not np.all(np.isfinite(v)):
            raise QuasinormError("profile values must be finite")
        if self.normalized and v[_e1_index(self.grid)] != 0.0:
            raise QuasinormError("normalized profile must vanish at e1")


def _e1_index(grid: ProjectiveGrid) -> int:
    e1 = basis_vector(grid.dim)
    for i, p in enumerate(grid.points):
        if np.array_equal(p.coords, e1):
            return i
    raise QuasinormError("grid does not contain e1")


def _log_ratio(x: NormSpec, y: NormSpec, pts: np.ndarray) -> np.ndarray:
    return x._log_gauge_many(pts) - y._log_gauge_many(pts)


def _grid_spacing(grid: ProjectiveGrid) -> float:
    n = grid.dim
    m = max(len(grid), 2)
    if n == 2:
        return math.pi / m
    return max(1e-3, math.pi / (2.0 * m ** (1.0 / (n - 1))))


def _ring_rows(center: np.ndarray, radius: float, count: int) -> np.ndarray:
    """Unit rows at graded geodesic offsets from a unit center row."""
    n = center.shape[0]
    if n == 2:
        perp = np.array([-center[1], center[0]])
        half = (count + 1) // 2
        sides = np.where(np.arange(count) % 2 == 0, 1.0, -1.0)
        radii = radius * ((np.arange(count) // 2 + 1) / half)
        return (
            np.cos(radii)[:, None] * center
            + (np.sin(radii) * sides)[:, None] * perp
        )
    basis = null_space(center[None, :])  # (n, n-1)
    k = n - 1
    seq = qmc.Halton(d=k, scramble=False).random(count + 1)[1:]
    gauss = _gaussian.ppf(np.clip(seq, 1e-12, 1.0 - 1e-12))
    norms = np.linalg.norm(gauss, axis=1)
    for j in np.flatnonzero(norms < 1e-9):
        gauss[j] = 0.0
        gauss[j, j % k] = 1.0
        norms[j] = 1.0
    tang = (gauss / norms[:, None]) @ basis.T
    radii = radius * ((np.arange(count) + 0.5) / count) ** (1.0 / k)
    return np.cos(radii)[:, None] * center + np.sin(radii)[:, None] * tang


def _polish_extremum(
    fun,
    center: Direction,
    value: float,
    radius: float,
    sign: float,
    budget: int = POLISH_BUDGET,
) -> tuple[Direction, float]:
    """Bounded derivative-free ascent of sign * fun around a witness."""
    evals = 0
    row = center.coords
    while evals < budget and radius > 1e-9:
        probes = _ring_rows(row, radius, 8)
        vals = fun(probes)
        evals += probes.shape[0]
        k = int(np.argmax(sign * vals))
        if sign * (vals[k] - value) > POLISH_MIN_GAIN:
            row, value = probes[k], float(vals[k])
        else:
            radius *= 0.5
    return canonicalize(row), value


def khare_distance(
    x: NormSpec, y: NormSpec, grid: ProjectiveGrid, polish: bool = True
) -> MetricWitness:
    """Multiplicative distance between two quasinorm classes on a grid.

    With r(u) = log||u||_X - log||u||_Y over the grid, lam = exp(max r) and
    mu = exp(max r - min r); the witnesses are the attaining directions
    (lowest grid index wins ties).  The grid value is a certified lower bound
    for the continuum distance; polishing never decreases it.
    """
    if x.dim != y.dim or x.dim != grid.dim:
        raise DimensionMismatch("specs and grid must share one dimension")
    r = _log_ratio(x, y, grid.matrix)
    imax = int(np.argmax(r))
    imin = int(np.argmin(r))
    hi_dir, hi = grid.points[imax], float(r[imax])
    lo_dir, lo = grid.points[imin], float(r[imin])
    if polish:
        fun = lambda pts: _log_ratio(x, y, pts)  # noqa: E731
        step = _grid_spacing(grid)
        hi_dir, hi = _polish_extremum(fun, hi_dir, hi, step, +1.0)
        lo_dir, lo = _polish_extremum(fun, lo_dir, lo, step, -1.0)
    return MetricWitness(
        mu=math.exp(hi - lo),
        lam=math.exp(hi),
        argmax_dir=hi_dir,
        argmin_dir=lo_dir,
        grid_size=len(grid),
        refined=polish,
    )


def triple_norm(x: NormSpec, grid: ProjectiveGrid) -> float:
    """Class norm: log2 of the multiplicative distance to the Euclidean class.

    Zero exactly when x is a dilation of the Euclidean norm at grid
    resolution.
    """
    return math.log2(khare_distance(x, Euclidean(x.dim), grid, polish=False).mu)


def to_log_profile(
    x: NormSpec, grid: ProjectiveGrid, normalize: bool = False
) -> LogProfile:
    """Sample log||u|| over the grid; optionally pin the e1 entry to 0."""
    if x.dim != grid.dim:
        raise DimensionMismatch("spec and grid dimensions differ")
    vals = x._log_gauge_many(grid.matrix)
    if normalize:
        vals = vals - vals[_e1_index(grid)]
    return LogProfile(grid=grid, values=vals, normalized=normalize)


def from_log_profile(profile: LogProfile) -> NormSpec:
    """Quasinorm spec whose grid values reproduce exp(profile) exactly."""
    return Profile(grid=profile.grid, logvalues=profile.values)


def range_metric(f: LogProfile, g: LogProfile) -> float:
    """max(f-g) - min(f-g): distance between profiles modulo constants.

    Equals log of the multiplicative distance between the corresponding
    classes within 1e-12, and is invariant under adding constants to either
    argument.
    """
    if f.grid.dim != g.grid.dim or not np.array_equal(f.grid.matrix, g.grid.matrix):
        raise QuasinormError("profiles live on different grids")
    d = f.values - g.values
    return float(d.max() - d.min())


@dataclass(frozen=True)
class MetricAxiomsReport:
    """Grid-exact check of the multiplicative metric axioms on a sample."""

    spec_count: int
    identity_max_dev: float  # max |d(X, X) - 1|
    symmetry_max_dev: float  # max |log d(X,Y) - log d(Y,X)|
    triangle_min_slack: float  # min of log d(X,Z) + log d(Z,Y) - log d(X,Y)
    passed: bool


def metric_axioms_report(
    specs: list[NormSpec], grid: ProjectiveGrid, tol: float = 1e-9
) -> MetricAxiomsReport:
    """Check identity, symmetry and the multiplicative triangle inequality.

    All quantities are computed from the same grid log-profiles, so symmetry
    holds exactly and the triangle slack measures only floating-point noise.
    """
    if len(specs) < 3:
        raise QuasinormError("need at least 3 specs for the axiom suite")
    profiles = [s._log_gauge_many(grid.matrix) for s in specs]

    def logd(i: int, j: int) -> float:
        d = profiles[i] - profiles[j]
        return float(d.max() - d.min())

    identity = max(abs(math.exp(logd(i, i)) - 1.0) for i in range(len(specs)))
    symmetry = max(
        abs(logd(i, j) - logd(j, i))
        for i in range(len(specs))
        for j in range(i + 1, len(specs))
    )
    slack = min(
        logd(i, k) + logd(k, j) - logd(i, j)
        for i in range(len(specs))
        for j in range(len(specs))
        for k in range(len(specs))
        if len({i, j, k}) == 3
    )
    passed = identity <= tol and symmetry <= tol and slack >= -tol
    return MetricAxiomsReport(
        spec_count=len(specs),
        identity_max_dev=identity,
        symmetry_max_dev=symmetry,
        triangle_min_slack=slack,
        passed=passed,
    )
