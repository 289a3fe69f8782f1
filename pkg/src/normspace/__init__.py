"""Computable geometry of continuous quasinorms on R^n modulo dilation.

The library evaluates symbolic quasinorms, computes the multiplicative
distance between classes with attained witnesses, performs the vector-space
operations on classes (geometric-mean interpolation, opposites, scalar
action, addition), estimates Banach-Mazur distances, and detects or breaks
the autoisometry groups of polyhedral norms.
"""

__version__ = "0.1.0"

from .projective import (
    Direction,
    ProjectiveError,
    ProjectiveGrid,
    basis_vector,
    canonicalize,
    geodesic_distance,
    grid_from_points,
    make_grid,
    refine_near,
)
from .quasinorm import (
    BallValidationError,
    BallValidationReport,
    DimensionMismatch,
    Euclidean,
    Interp,
    Lp,
    MaxOf,
    NormSpec,
    Opposite,
    Polytope,
    PolytopeBall,
    Profile,
    Pullback,
    QuasinormError,
    Scaled,
    WeightedLp,
    ball_from_vertices,
    evaluate,
    evaluate_many,
    extreme_points,
    is_exposed,
    is_norm,
    minkowski_functional,
    polyhedral_approx,
    quasinorm_constant,
    validate_ball,
)
from .metric import (
    LogProfile,
    MetricAxiomsReport,
    MetricWitness,
    from_log_profile,
    khare_distance,
    metric_axioms_report,
    range_metric,
    to_log_profile,
    triple_norm,
)
from .operations import (
    ClassRep,
    SpaceAxiomsReport,
    add,
    interpolate,
    limit_of_sequence,
    mean,
    normalize_class,
    opposite,
    scalar_mult,
    space_axioms_report,
)
from .banach_mazur import BMResult, LinearMap, bm_distance, operator_norm, pullback
from .isometry import (
    IsometryClass,
    IsometryReport,
    SymmetryBreakError,
    classify_isometry,
    general_position,
    isometry_group,
    power_bounded,
    separation_check,
    symmetry_break,
)
from .serialize import SchemaError, dump_spec, load_spec, spec_from_dict, spec_to_dict

__all__ = [name for name in dir() if not name.startswith("_")]
