"""Vector-space operations on quasinorm classes and the axiom suite.

Classes modulo dilation form a linear space: the mean of two classes is the
pointwise geometric mean, the origin is the Euclidean class, the opposite of
a class is |x|_2^2 / ||x||, the scalar action is theta-weighted geometric
interpolation against the Euclidean norm, and addition composes the two.
Everything returns symbolic composites; numeric profiles appear only at the
measurement boundary, so nested operations do not compound interpolation
error.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .projective import ProjectiveGrid, basis_vector
from .quasinorm import (
    DimensionMismatch,
    Euclidean,
    Interp,
    NormSpec,
    Opposite,
    QuasinormError,
    Scaled,
    evaluate,
    evaluate_many,
)
from .metric import (
    LogProfile,
    khare_distance,
    range_metric,
    to_log_profile,
    triple_norm,
)

__all__ = [
    "ClassRep",
    "SpaceAxiomsReport",
    "add",
    "interpolate",
    "limit_of_sequence",
    "mean",
    "normalize_class",
    "opposite",
    "scalar_mult",
    "space_axioms_report",
]


@dataclass(frozen=True)
class ClassRep:
    """A chosen representative of a class, normalized to value 1 at e1."""

    spec: NormSpec
    normalized_at_e1: bool


def interpolate(x: NormSpec, y: NormSpec, theta: float) -> NormSpec:
    """Geometric interpolation x^theta * y^(1-theta) for theta in [0, 1].

    theta = 1 gives x pointwise and theta = 0 gives y; the log-profile of the
    result is the theta-convex combination of the factors' log-profiles,
    exactly at grid points.  Values of theta outside [0, 1] are extrapolation
    and belong to scalar_mult.
    """
    if x.dim != y.dim:
        raise DimensionMismatch("interpolands live in different dimensions")
    if not (0.0 <= theta <= 1.0):
        raise QuasinormError(
            "theta must lie in [0, 1]; use scalar_mult for extrapolation"
        )
    return Interp(left=x, right=y, theta=theta)


def mean(x: NormSpec, y: NormSpec) -> NormSpec:
    """Midpoint of two classes: the pointwise geometric mean."""
    return interpolate(x, y, 0.5)


def opposite(x: NormSpec) -> NormSpec:
    """Additive inverse of the class: |x|_2^2 / ||x|| (0 at 0).

    An involution; the Euclidean class is its own opposite.
    """
    return Opposite(inner=x)


def scalar_mult(theta: float, x: NormSpec) -> NormSpec:
    """Scalar action on classes: ||.||^theta |.|_2^(1-theta) for theta >= 0.

    Negative theta acts through the opposite: (-theta) * [X] is the action of
    theta on the opposite class.  1*X evaluates as X and 0*X as the Euclidean
    norm, pointwise.
    """
    if not np.isfinite(theta):
        raise QuasinormError("theta must be finite")
    e = Euclidean(x.dim)
    if theta >= 0:
        return Interp(left=x, right=e, theta=float(theta))
    return Interp(left=Opposite(inner=x), right=e, theta=float(-theta))


def add(x: NormSpec, y: NormSpec) -> NormSpec:
    """Class addition: twice the mean, evaluating as ||x|| ||y|| / |x|_2.

    The Euclidean class is the identity and opposite(x) the inverse.
    """
    if x.dim != y.dim:
        raise DimensionMismatch("summands live in different dimensions")
    return Interp(left=Interp(left=x, right=y, theta=0.5),
                  right=Euclidean(x.dim), theta=2.0)


def normalize_class(x: NormSpec) -> ClassRep:
    """Dilate x so the representative takes value 1 at e1."""
    c = evaluate(x, basis_vector(x.dim))
    return ClassRep(spec=Scaled(c=1.0 / c, inner=x), normalized_at_e1=True)


def limit_of_sequence(
    seq: list[NormSpec], grid: ProjectiveGrid, tol: float
) -> LogProfile:
    """Limit profile of a Cauchy sequence of classes, at grid resolution.

    Normalized log-profiles are scanned for the first tail after which every
    successor gap stays below tol/2; the tail must then be pairwise within
    tol in the range metric, and the final profile is returned as the limit
    representative.  Raises when no such tail exists.
    """
    if len(seq) < 2:
        raise QuasinormError("need at least 2 specs to take a limit")
    if not (tol > 0):
        raise QuasinormError("tol must be positive")
    profiles = [to_log_profile(s, grid, normalize=True) for s in seq]
    gaps = [range_metric(a, b) for a, b in itertools.pairwise(profiles)]
    bad = [k for k, g in enumerate(gaps) if g >= tol / 2.0]
    tail = bad[-1] + 1 if bad else 0
    if tail > len(profiles) - 2:
        raise QuasinormError(f"sequence not Cauchy at tolerance {tol:g}")
    for a, b in itertools.combinations(profiles[tail:], 2):
        if range_metric(a, b) > tol:
            raise QuasinormError(f"sequence not Cauchy at tolerance {tol:g}")
    limit = profiles[-1]
    # Bounded sandwich: the limit stays inside the envelope of the sequence.
    lo = min(float(p.values.min()) for p in profiles)
    hi = max(float(p.values.max()) for p in profiles)
    assert lo <= limit.values.min() and limit.values.max() <= hi
    return limit


@dataclass(frozen=True)
class SpaceAxiomsReport:
    """Grid-exact deviations of the linear-space axioms on a sample."""

    sample_count: int
    homogeneity_dev: float  # |||theta*X||| versus |theta| |||X|||
    additive_invariance_dev: float  # log d(X+Z, Y+Z) versus log d(X, Y)
    mean_contraction_dev: float  # log d(mean) versus (1/2) log d
    identity_law_dev: float  # X + euclidean = X, pointwise
    inverse_law_dev: float  # X + (-X) = euclidean, pointwise
    commutativity_dev: float
    associativity_dev: float
    max_deviation: float
    passed: bool


def space_axioms_report(
    samples: list[NormSpec],
    grid: ProjectiveGrid,
    seed: int = 0,
    tol: float = 1e-9,
) -> SpaceAxiomsReport:
    """Check the linear-space axioms over sample triples, grid-exactly.

    Pointwise laws are measured in relative error at seeded points; metric
    laws compare grid log-ranges.  All deviations must stay below tol.
    """
    if len(samples) < 3:
        raise QuasinormError("need at least 3 sample specs")
    n = samples[0].dim
    if any(s.dim != n for s in samples):
        raise DimensionMismatch("sample specs live in different dimensions")
    rng = np.random.default_rng([abs(int(seed)), n, 977])
    pts = rng.normal(size=(200, n))
    e = Euclidean(n)
    thetas = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 3.0)

    def rel_dev(a: NormSpec, b: NormSpec) -> float:
        va = evaluate_many(a, pts)
        vb = evaluate_many(b, pts)
        return float(np.max(np.abs(va - vb) / vb))

    hom = 0.0
    add_inv = 0.0
    contraction = 0.0
    ident = inv = comm = assoc = 0.0
    triples = [
        (samples[i], samples[(i + 1) % len(samples)], samples[(i + 2) % len(samples)])
        for i in range(len(samples))
    ]
    for x, y, z in triples:
        tx = triple_norm(x, grid)
        for theta in thetas:
            hom = max(
                hom, abs(triple_norm(scalar_mult(theta, x), grid) - abs(theta) * tx)
            )
        dxy = math.log(khare_distance(x, y, grid, polish=False).mu)
        dsum = math.log(khare_distance(add(x, z), add(y, z), grid, polish=False).mu)
        dmean = math.log(
            khare_distance(mean(x, z), mean(y, z), grid, polish=False).mu
        )
        add_inv = max(add_inv, abs(dsum - dxy))
        contraction = max(contraction, abs(dmean - 0.5 * dxy))
        ident = max(ident, rel_dev(add(x, e), x))
        inv = max(inv, rel_dev(add(x, opposite(x)), e))
        comm = max(comm, rel_dev(add(x, y), add(y, x)))
        assoc = max(assoc, rel_dev(add(add(x, y), z), add(x, add(y, z))))
    worst = max(hom, add_inv, contraction, ident, inv, comm, assoc)
    return SpaceAxiomsReport(
        sample_count=len(samples),
        homogeneity_dev=hom,
        additive_invariance_dev=add_inv,
        mean_contraction_dev=contraction,
        identity_law_dev=ident,
        inverse_law_dev=inv,
        commutativity_dev=comm,
        associativity_dev=assoc,
        max_deviation=worst,
        passed=worst <= tol,
    )
