"""Autoisometry groups of polyhedral norms and how to break them.

A linear isometry of a polytope gauge permutes the extreme points of the
ball, so the full group is found by exact combinatorial search: candidate
maps are built from the images of n independent extreme points and pruned by
gauge preservation on every vertex.  Every isometry of any quasinorm has
unit-modulus eigenvalues and is diagonalizable over C (its powers would
otherwise be unbounded); `classify_isometry` enforces this and reports the
canonical invariant-plane block.

`symmetry_break` perturbs a polyhedral ball into a nearby norm whose detected
group is only {Id, -Id}: it adds a pair of vertices along the all-ones
direction (tilted deterministically when that direction is degenerate with
the chosen exposed basis), overlays one flat p-norm bump per basis point with
strictly shrinking supports, and verifies the construction numerically.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space

from .projective import (
    Direction,
    ProjectiveGrid,
    _tangent_probes,
    canonicalize,
    geodesic_distance,
    grid_from_points,
    make_grid,
)
from .quasinorm import (
    DimensionMismatch,
    MaxOf,
    NormSpec,
    Polytope,
    PolytopeBall,
    Pullback,
    QuasinormError,
    WeightedLp,
    ball_from_vertices,
    evaluate,
    evaluate_many,
    extreme_points,
    is_exposed,
    minkowski_functional,
    polyhedral_approx,
    validate_ball,
)
from .metric import khare_distance
from .banach_mazur import LinearMap, as_matrix, operator_norm

__all__ = [
    "IsometryClass",
    "IsometryReport",
    "SymmetryBreakError",
    "classify_isometry",
    "general_position",
    "isometry_group",
    "power_bounded",
    "separation_check",
    "symmetry_break",
]

ISO_TOL = 1e-9
MAX_ISO_VERTICES = 24


class SymmetryBreakError(QuasinormError):
    """The symmetry-breaking construction failed verification."""


@dataclass(frozen=True)
class IsometryClass:
    """Canonical invariant-plane block of an isometry.

    kind is one of "identity", "negation", "rotation-block",
    "reflection-block" or "other"; angle is set for rotation blocks.
    """

    kind: str
    angle: float | None = None


@dataclass(frozen=True)
class IsometryReport:
    """Finite group of linear maps preserving a gauge, with classifications."""

    elements: tuple[LinearMap, ...]
    trivial: bool
    classifications: tuple[IsometryClass, ...]

    @property
    def order(self) -> int:
        return len(self.elements)


def general_position(points) -> bool:
    """True iff every n-subset of the points is linearly independent.

    Equivalently no linear hyperplane contains n of them: some (hence every)
    nonzero skew-symmetric n-form is nonvanishing on each n-tuple.
    Determinants are compared at 1e-10 relative to the product of row norms.
    """
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2:
        raise QuasinormError("points must form a (k, n) array")
    n = arr.shape[1]
    if arr.shape[0] < n:
        raise QuasinormError(f"need at least {n} points in R^{n}")
    for subset in itertools.combinations(range(arr.shape[0]), n):
        m = arr[list(subset)]
        scale = float(np.prod(np.linalg.norm(m, axis=1)))
        if scale == 0.0 or abs(float(np.linalg.det(m))) <= 1e-10 * scale:
            return False
    return True


def power_bounded(a, kmax: int, bound: float) -> bool:
    """Whether the powers A^k keep Frobenius norm inside [1/bound, bound].

    Necessary for A to be an isometry of any quasinorm; a shear fails.
    Overflow counts as unbounded.
    """
    if kmax < 1:
        raise QuasinormError("kmax must be at least 1")
    mat = as_matrix(a)
    power = np.eye(mat.shape[0])
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(kmax):
            power = power @ mat
            if not np.all(np.isfinite(power)):
                return False
            fro = float(np.linalg.norm(power))
            if fro > bound or fro < 1.0 / bound:
                return False
    return True


def _preserves_gauge(mat: np.ndarray, x: NormSpec, pts: np.ndarray,
                     tol: float = ISO_TOL) -> bool:
    before = evaluate_many(x, pts)
    after = evaluate_many(x, pts @ mat.T)
    return bool(np.max(np.abs(after / before - 1.0)) <= tol)


def _classify_matrix(mat: np.ndarray, tol: float = ISO_TOL) -> IsometryClass:
    """Eigen-analysis of a gauge-preserving map; raises when impossible.

    Checks unit modulus of every eigenvalue and diagonalizability over C,
    then reports one invariant plane: a rotation block for a conjugate pair
    e^{+-i alpha}, a reflection block for a real {+1, -1} pair, identity or
    negation otherwise.
    """
    n = mat.shape[0]
    eigvals = np.linalg.eigvals(mat)
    if np.max(np.abs(np.abs(eigvals) - 1.0)) > tol:
        raise QuasinormError(
            "eigenvalue modulus differs from 1 -- not an isometry of any quasinorm"
        )
    for lam in eigvals:
        alg = int(np.sum(np.abs(eigvals - lam) <= 1e-7))
        geo = n - np.linalg.matrix_rank(
            mat - lam * np.eye(n), tol=1e-7 * max(1.0, float(np.abs(lam)))
        )
        if geo < alg:
            raise QuasinormError(
                "defective eigenvalue (not diagonalizable over C) -- "
                "not an isometry of any quasinorm"
            )
    if np.allclose(mat, np.eye(n), atol=tol):
        return IsometryClass(kind="identity")
    if np.allclose(mat, -np.eye(n), atol=tol):
        return IsometryClass(kind="negation")
    complex_idx = np.flatnonzero(np.abs(eigvals.imag) > tol)
    if complex_idx.size:
        lam = eigvals[complex_idx[np.argmax(np.abs(eigvals.imag[complex_idx]))]]
        return IsometryClass(
            kind="rotation-block", angle=abs(float(np.angle(lam)))
        )
    has_plus = bool(np.any(np.abs(eigvals - 1.0) <= tol))
    has_minus = bool(np.any(np.abs(eigvals + 1.0) <= tol))
    if has_plus and has_minus:
        return IsometryClass(kind="reflection-block")
    return IsometryClass(kind="other")


def classify_isometry(a, x: NormSpec, grid: ProjectiveGrid) -> IsometryClass:
    """Classify a map that preserves the gauge at grid resolution.

    Raises when the map fails gauge preservation on the grid (within 1e-9
    relative) or has eigenvalues no isometry of a quasinorm can have.
    """
    mat = as_matrix(a)
    if mat.shape != (x.dim, x.dim) or grid.dim != x.dim:
        raise DimensionMismatch("map, spec and grid must share one dimension")
    # Universal necessary conditions first: they rule the map out as an
    # isometry of every quasinorm, not just this one.
    cls = _classify_matrix(mat)
    if not _preserves_gauge(mat, x, grid.matrix):
        raise QuasinormError("not an isometry at this resolution")
    return cls


def _independent_rows(rows: np.ndarray, n: int) -> list[int]:
    picked: list[int] = []
    for i in range(rows.shape[0]):
        trial = rows[picked + [i]]
        if np.linalg.matrix_rank(trial) == len(picked) + 1:
            picked.append(i)
        if len(picked) == n:
            return picked
    raise QuasinormError("vertex set does not span the space")


def isometry_group(ball: PolytopeBall, grid: ProjectiveGrid) -> IsometryReport:
    """Exact autoisometry group of a polytope gauge.

    Enumerates linear maps sending the extreme-point set onto itself:
    candidates map a fixed independent n-tuple of extreme points to every
    ordered n-tuple of extreme points and are pruned by exact vertex
    permutation plus gauge preservation on the grid.  Always contains Id and
    -Id; `trivial` means nothing else survives.
    """
    validate_ball(ball)
    verts = np.array(extreme_points(ball))
    if verts.shape[0] > MAX_ISO_VERTICES:
        raise QuasinormError(
            f"extreme point count {verts.shape[0]} exceeds {MAX_ISO_VERTICES}; "
            "use a coarser polyhedral approximation for a heuristic search"
        )
    n = ball.dim
    base_idx = _independent_rows(verts, n)
    base = verts[base_idx].T  # columns are the chosen points
    base_inv = np.linalg.inv(base)
    scale = float(np.max(np.linalg.norm(verts, axis=1)))
    found: dict[bytes, np.ndarray] = {}
    for image_idx in itertools.permutations(range(verts.shape[0]), n):
        image = verts[list(image_idx)].T
        mat = image @ base_inv
        if abs(float(np.linalg.det(mat))) < 1e-9:
            continue
        mapped = verts @ mat.T
        dists = np.linalg.norm(mapped[:, None, :] - verts[None, :, :], axis=2)
        nearest = np.argmin(dists, axis=1)
        if np.max(dists[np.arange(len(verts)), nearest]) > ISO_TOL * max(1.0, scale):
            continue
        if len(set(nearest.tolist())) != len(verts):
            continue
        if not _preserves_gauge(mat, Polytope(ball), grid.matrix):
            continue
        found.setdefault((np.round(mat, 9) + 0.0).tobytes(), mat)
    elements = [found[k] for k in sorted(found)]
    mats = np.array(elements)

    def _contains(candidate: np.ndarray) -> bool:
        gaps = np.linalg.norm(mats - candidate, axis=(1, 2))
        return bool(gaps.min() <= 1e-7)

    # Group sanity: closed under inverse and composition within tolerance.
    for m in elements:
        if not _contains(np.linalg.inv(m)):
            raise QuasinormError("detected set is not closed under inverse")
    for m in elements:
        for other in elements:
            if not _contains(m @ other):
                raise QuasinormError("detected set is not closed under product")
    ident = np.eye(n)
    if min(np.linalg.norm(m - ident) for m in elements) > 1e-9:
        raise QuasinormError("identity missing from detected group")
    if min(np.linalg.norm(m + ident) for m in elements) > 1e-9:
        raise QuasinormError("negation missing from detected group")
    trivial = len(elements) == 2
    classes = tuple(_classify_matrix(m) for m in elements)
    return IsometryReport(
        elements=tuple(LinearMap(m) for m in elements),
        trivial=trivial,
        classifications=classes,
    )


def separation_check(f, x: NormSpec, grid: ProjectiveGrid) -> float:
    """min(||F - Id||_X, ||F + Id||_X) for a nontrivial isometry F of X.

    For genuine isometries of a norm this is at least 1 (up to grid slack).
    """
    mat = as_matrix(f)
    n = x.dim
    ident = np.eye(n)
    if np.allclose(mat, ident, atol=ISO_TOL) or np.allclose(mat, -ident, atol=ISO_TOL):
        raise QuasinormError("separation defined for nontrivial isometries")
    if not _preserves_gauge(mat, x, grid.matrix):
        raise QuasinormError("not an isometry at this resolution")
    lo = operator_norm(mat - ident, x, x, grid)
    hi = operator_norm(mat + ident, x, x, grid)
    return min(lo, hi)


# ---------------------------------------------------------------------------
# symmetry breaking


def _exposed_basis(ball: PolytopeBall) -> list[np.ndarray]:
    verts = extreme_points(ball)
    basis: list[np.ndarray] = []
    for v in verts:
        exposed, _ = is_exposed(ball, v)
        if not exposed:
            continue
        trial = np.array(basis + [v])
        if np.linalg.matrix_rank(trial) == len(basis) + 1:
            basis.append(np.array(v))
        if len(basis) == ball.dim:
            return basis
    raise SymmetryBreakError("could not select an exposed basis from the ball")


def _added_direction(basis: list[np.ndarray], n: int) -> np.ndarray:
    """All-ones direction, tilted deterministically into general position.

    The construction needs the added vertex to be in general position with
    the chosen basis; for balls with a basis vertex parallel to the all-ones
    direction (the square is the canonical case) a small deterministic tilt
    restores it.
    """
    tweak = np.arange(1, n + 1, dtype=float)
    tweak /= np.linalg.norm(tweak)
    w = np.ones(n)
    for k in range(24):
        cand = w + (0.15 * k) * tweak
        if general_position(np.array(basis + [cand])):
            return cand
    raise SymmetryBreakError("no added direction in general position was found")


def _bump_regions(spec: MaxOf, centers: list[np.ndarray], n_bumps: int) -> list[float]:
    """Geodesic diameter of each bump's active region on the sphere."""
    diameters: list[float] = []
    for i in range(n_bumps):
        center = canonicalize(centers[i])
        bump = spec.parts[1 + i]
        local: list[Direction] = [center]
        for radius in (0.3, 0.15, 0.075, 0.03, 0.01):
            local.extend(_tangent_probes(center, radius, 24))
        pts = np.array([d.coords for d in local])
        bump_vals = evaluate_many(bump, pts)
        rest = np.maximum.reduce(
            [evaluate_many(p, pts) for j, p in enumerate(spec.parts) if j != 1 + i]
        )
        active = [d for d, b, r in zip(local, bump_vals, rest) if b > r]
        if not active:
            diameters.append(0.0)
            continue
        diam = 0.0
        for a, b in itertools.combinations(active, 2):
            diam = max(diam, geodesic_distance(a, b))
        diam = max(diam, 2.0 * max(geodesic_distance(center, d) for d in active))
        diameters.append(diam)
    return diameters


def _verification_grid(n: int, specials: list[np.ndarray], seed: int) -> ProjectiveGrid:
    budget = MAX_ISO_VERTICES // 2
    filler = make_grid(n, max(4, budget - len(specials)), seed)
    vectors = [p.coords for p in filler.points][: budget - len(specials)]
    return grid_from_points(n, vectors + list(specials), seed=seed)


def symmetry_break(
    ball: PolytopeBall, epsilon_target: float, seed: int = 0
) -> tuple[NormSpec, IsometryReport, float]:
    """Perturb a polytope gauge into a nearby norm with trivial detected group.

    Selects an exposed basis x_1..x_n, adds a vertex pair along the (tilted)
    all-ones direction scaled just outside the ball, and overlays one flat
    p-norm bump per basis point (exponent 2i+2, amplitude eps_i, transverse
    softness M_i) so the unit sphere acquires n+1 smooth or conical marks of
    strictly decreasing size.  Verifies: representative marked points in
    general position, strictly decreasing bump diameters, multiplicative
    distance to the input within 1 + epsilon_target, and a trivial detected
    group on a polyhedral approximation.  Retries with halved delta/eps and
    doubled M up to 10 rounds before failing.
    """
    if not (epsilon_target > 0):
        raise QuasinormError("epsilon_target must be positive")
    validate_ball(ball)
    n = ball.dim
    base_spec = Polytope(ball)
    basis = _exposed_basis(ball)
    for v in basis:
        exposed, _ = is_exposed(ball, v)
        if not exposed:
            raise SymmetryBreakError("basis vertex is not exposed")
    w = _added_direction(basis, n)
    delta0 = epsilon_target / 4.0
    failure = "no rounds attempted"
    for attempt in range(10):
        shrink = 2.0**attempt
        delta = delta0 / shrink
        x_new = (1.0 + delta) / minkowski_functional(ball, w) * w
        try:
            prime = ball_from_vertices(
                np.vstack([ball.vertices, x_new[None, :], -x_new[None, :]])
            )
        except QuasinormError as exc:
            failure = f"augmented hull failed: {exc}"
            continue
        funcs = []
        ok = True
        for v in basis:
            exposed, func = is_exposed(prime, v)
            if not exposed:
                ok = False
                failure = "basis vertex lost exposedness after adding the vertex"
                break
            funcs.append(func)
        if not ok:
            continue
        exposed, _ = is_exposed(prime, x_new)
        if not exposed:
            failure = "added vertex is not exposed"
            continue
        bumps: list[NormSpec] = []
        eps_list = []
        for i, (v, func) in enumerate(zip(basis, funcs), start=1):
            p = 2 * i + 2
            eps_i = delta0 / (2.0**i) / shrink
            m_i = 8.0 * (2.0**i) * shrink
            kernel = null_space(func[None, :])  # (n, n-1)
            frame = np.column_stack([v] + [kernel[:, j] for j in range(n - 1)])
            coords = np.linalg.inv(frame)
            weights = np.concatenate([[1.0 + eps_i], np.full(n - 1, 1.0 / m_i)])
            bumps.append(
                Pullback(matrix=coords, inner=WeightedLp(n=n, p=float(p),
                                                         weights=weights))
            )
            eps_list.append(eps_i)
        result = MaxOf(parts=tuple([Polytope(prime)] + bumps))
        reps = [v / evaluate(result, v) for v in basis]
        reps.append(x_new / evaluate(result, x_new))
        if not general_position(np.array(reps)):
            failure = "marked representative points are not in general position"
            continue
        diameters = _bump_regions(result, basis, n)
        if any(d <= 0 for d in diameters) or any(
            a <= b for a, b in zip(diameters, diameters[1:])
        ):
            failure = "bump diameters are not strictly decreasing"
            continue
        grid = make_grid(n, 720 if n == 2 else 2000, seed)
        witness = khare_distance(result, base_spec, grid, polish=False)
        if witness.mu > 1.0 + epsilon_target:
            failure = (
                f"distance {witness.mu:.6f} exceeds target {1 + epsilon_target:.6f}"
            )
            continue
        specials = [canonicalize(v).coords for v in basis]
        specials.append(canonicalize(x_new).coords)
        vgrid = _verification_grid(n, specials, seed)
        approx = polyhedral_approx(result, vgrid, max_vertices=2 * len(vgrid))
        report = isometry_group(approx, vgrid)
        if not report.trivial:
            failure = f"detected group has order {report.order}"
            continue
        return result, report, witness.mu
    raise SymmetryBreakError(f"verification failed after retries: {failure}")
