"""Canonical representatives and sampling grids for the space of lines in R^n.

A continuous quasinorm modulo dilation is determined by its values on lines
through the origin, so every distance computation in this package reduces to
values sampled at finitely many unit representatives.  The canonical
representative of a line is the unit vector whose first nonzero coordinate is
strictly positive; grids of representatives are deterministic (bit-identical
on reconstruction) and near-uniform: exact uniform angles for n=2, a
Fibonacci hemisphere lattice for n=3, and a low-discrepancy hemisphere sample
for n>=4.

All values are immutable after construction and safe for concurrent reads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.linalg import null_space
from scipy.stats import norm as _gaussian
from scipy.stats import qmc

__all__ = [
    "DUPLICATE_TOL",
    "Direction",
    "ProjectiveError",
    "ProjectiveGrid",
    "basis_vector",
    "canonicalize",
    "geodesic_distance",
    "grid_from_points",
    "make_grid",
    "refine_near",
]

# Grid points whose representatives are closer than this (in either sign) are
# treated as the same line when deduplicating.
DUPLICATE_TOL = 1e-10


class ProjectiveError(ValueError):
    """Invalid projective point or grid parameter."""


def basis_vector(n: int, i: int = 0) -> np.ndarray:
    v = np.zeros(n)
    v[i] = 1.0
    return v


def _as_vector(v) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1:
        raise ProjectiveError("expected a flat coordinate vector")
    if not np.all(np.isfinite(arr)):
        raise ProjectiveError("coordinates must be finite")
    return arr


@dataclass(frozen=True)
class Direction:
    """Canonical unit representative of a line through the origin.

    Invariants: Euclidean length 1 (within 1e-12) and the first nonzero
    coordinate is strictly positive, so a vector and its negation yield the
    same Direction.
    """

    coords: np.ndarray

    def __post_init__(self):
        arr = np.array(self.coords, dtype=float, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)
        if abs(float(np.linalg.norm(arr)) - 1.0) > 1e-12:
            raise ProjectiveError("direction is not unit length")
        nz = np.flatnonzero(arr)
        if nz.size == 0 or arr[nz[0]] <= 0:
            raise ProjectiveError("direction is not in canonical form")

    @property
    def dim(self) -> int:
        return int(self.coords.shape[0])

    def __eq__(self, other) -> bool:
        return isinstance(other, Direction) and np.array_equal(
            self.coords, other.coords
        )

    def __hash__(self) -> int:
        return hash(self.coords.tobytes())

    def __repr__(self) -> str:
        inside = ", ".join(repr(float(c)) for c in self.coords)
        return f"Direction([{inside}])"


def canonicalize(v) -> Direction:
    """Map a nonzero vector to the canonical representative of its line.

    canonicalize(v) == canonicalize(-v) == canonicalize(3 * v).  The map is
    exactly idempotent: feeding the output coordinates back in reproduces the
    same floats, which grid deduplication and table lookups rely on.
    """
    arr = _as_vector(v)
    norm = float(np.linalg.norm(arr))
    if norm == 0.0:
        raise ProjectiveError("not a projective point: zero vector")
    u = arr / norm
    # Renormalize until the coordinates stop changing; a single division can
    # land one ulp off the unit sphere, which would break idempotence.
    for _ in range(8):
        n2 = float(np.linalg.norm(u))
        if n2 == 1.0:
            break
        nxt = u / n2
        if np.array_equal(nxt, u):
            break
        u = nxt
    nz = np.flatnonzero(u)
    if nz.size == 0:
        raise ProjectiveError("not a projective point: zero vector")
    if u[nz[0]] < 0:
        u = -u
    u = u + 0.0  # clears any -0.0 left by the sign flip
    return Direction(u)


def geodesic_distance(u, v) -> float:
    """Distance between two lines: arccos of |<u, v>| for unit u, v."""
    a = u.coords if isinstance(u, Direction) else _as_vector(u)
    b = v.coords if isinstance(v, Direction) else _as_vector(v)
    dot = abs(float(np.dot(a, b)))
    return math.acos(min(1.0, dot))


@dataclass(frozen=True)
class ProjectiveGrid:
    """Ordered, duplicate-free set of canonical directions containing e1."""

    dim: int
    points: tuple[Direction, ...]
    resolution: int
    seed: int = 0

    def __post_init__(self):
        if self.dim < 2:
            raise ProjectiveError("dimension must be at least 2")
        if not self.points:
            raise ProjectiveError("grid is empty")
        if any(p.dim != self.dim for p in self.points):
            raise ProjectiveError("grid points have inconsistent dimension")
        e1 = basis_vector(self.dim)
        if not any(np.array_equal(p.coords, e1) for p in self.points):
            raise ProjectiveError("grid must contain the direction e1")

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def matrix(self) -> np.ndarray:
        """(len, dim) array of the representatives, read-only."""
        m = np.array([p.coords for p in self.points])
        m.setflags(write=False)
        return m

    def index_of(self, direction: Direction) -> int:
        """Exact-match index of a direction, or -1."""
        for i, p in enumerate(self.points):
            if np.array_equal(p.coords, direction.coords):
                return i
        return -1


def _dedup(dirs: list[Direction], tol: float = DUPLICATE_TOL) -> list[Direction]:
    kept: list[Direction] = []
    mat: np.ndarray | None = None
    for d in dirs:
        if mat is not None:
            diff = np.linalg.norm(mat - d.coords, axis=1)
            summ = np.linalg.norm(mat + d.coords, axis=1)
            if float(np.minimum(diff, summ).min()) < tol:
                continue
        kept.append(d)
        row = d.coords[None, :]
        mat = row if mat is None else np.vstack([mat, row])
    return kept


def make_grid(n: int, m: int, seed: int = 0) -> ProjectiveGrid:
    """Deterministic grid of m canonical directions in R^n.

    n=2 uses the exact angles k*pi/m for k = 0..m-1; n=3 a Fibonacci
    hemisphere lattice (seed is unused below n=4); n>=4 a scrambled Halton
    sample pushed to the hemisphere through the Gaussian map.  The direction
    e1 is always present.
    """
    if n < 2:
        raise ProjectiveError("dimension must be at least 2")
    if m < 4:
        raise ProjectiveError("resolution must be at least 4")
    if n == 2:
        angles = np.arange(m) * (np.pi / m)
        dirs = [canonicalize((math.cos(a), math.sin(a))) for a in angles]
    elif n == 3:
        k = np.arange(m - 1)
        x = (k + 0.5) / (m - 1)  # strictly positive: already canonical side
        r = np.sqrt(1.0 - x * x)
        phi = k * (np.pi * (3.0 - math.sqrt(5.0)))
        pts = np.column_stack([x, r * np.cos(phi), r * np.sin(phi)])
        dirs = [canonicalize(basis_vector(n))]
        dirs += [canonicalize(p) for p in pts]
    else:
        eng = qmc.Halton(d=n, scramble=True, seed=seed)
        raw = np.clip(eng.random(m - 1), 1e-12, 1.0 - 1e-12)
        gauss = _gaussian.ppf(raw)
        dirs = [canonicalize(basis_vector(n))]
        for row in gauss:
            if np.linalg.norm(row) < 1e-9:
                continue
            dirs.append(canonicalize(row))
    return ProjectiveGrid(dim=n, points=tuple(_dedup(dirs)), resolution=m, seed=seed)


def _tangent_probes(center: Direction, radius: float, count: int) -> list[Direction]:
    """Deterministic canonical directions within geodesic `radius` of center."""
    c = center.coords
    n = c.shape[0]
    basis = null_space(c[None, :])  # (n, n-1), orthonormal
    k = n - 1
    probes: list[Direction] = []
    if k == 1:
        t = basis[:, 0]
        half = (count + 1) // 2
        for j in range(count):
            side = 1.0 if j % 2 == 0 else -1.0
            depth = (j // 2 + 1) / half
            r = radius * depth
            probes.append(canonicalize(math.cos(r) * c + math.sin(r) * side * t))
    else:
        seq = qmc.Halton(d=k, scramble=False).random(count + 1)[1:]
        gauss = _gaussian.ppf(np.clip(seq, 1e-12, 1.0 - 1e-12))
        for j, row in enumerate(gauss):
            nrm = float(np.linalg.norm(row))
            if nrm < 1e-9:
                row = np.zeros(k)
                row[j % k] = 1.0
                nrm = 1.0
            tdir = basis @ (row / nrm)
            r = radius * ((j + 0.5) / count) ** (1.0 / k)
            probes.append(canonicalize(math.cos(r) * c + math.sin(r) * tdir))
    return probes


def refine_near(
    grid: ProjectiveGrid, center: Direction, radius: float, count: int
) -> ProjectiveGrid:
    """Grid augmented with `count` directions near `center` (duplicates dropped).

    The added points are a deterministic function of (center, radius, count),
    so refining twice with the same arguments is idempotent in membership.
    Existing points keep their indices: the result extends the input grid.
    """
    if not (0.0 < radius <= math.pi / 2.0):
        raise ProjectiveError("radius must lie in (0, pi/2]")
    if count < 1:
        raise ProjectiveError("count must be at least 1")
    if center.dim != grid.dim:
        raise ProjectiveError("center dimension does not match grid")
    added = _tangent_probes(center, radius, count)
    pts = _dedup(list(grid.points) + added)
    return ProjectiveGrid(
        dim=grid.dim, points=tuple(pts), resolution=grid.resolution, seed=grid.seed
    )


def grid_from_points(dim: int, vectors, resolution: int | None = None,
                     seed: int = 0) -> ProjectiveGrid:
    """Grid built from explicit vectors; e1 is prepended when missing."""
    dirs = [canonicalize(v) for v in vectors]
    e1 = canonicalize(basis_vector(dim))
    if all(d != e1 for d in dirs):
        dirs = [e1] + dirs
    elif not np.array_equal(dirs[0].coords, e1.coords):
        dirs = [e1] + [d for d in dirs if d != e1]
    pts = tuple(_dedup(dirs))
    return ProjectiveGrid(
        dim=dim,
        points=pts,
        resolution=len(pts) if resolution is None else resolution,
        seed=seed,
    )
