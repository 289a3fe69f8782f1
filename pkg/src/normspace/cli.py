"""normspace command line: distances, class operations, axiom suites, plots.

Norm specs travel as JSON files (see `serialize`).  Every command is
deterministic given its inputs, seed and grid resolution.  Exit codes:
0 success, 1 property failure, 2 input/validation error, 3 dimension
mismatch, 4 computation failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .projective import ProjectiveError, make_grid
from .quasinorm import (
    BallValidationError,
    DimensionMismatch,
    Polytope,
    QuasinormError,
    evaluate,
    polyhedral_approx,
)
from .metric import (
    from_log_profile,
    khare_distance,
    metric_axioms_report,
    to_log_profile,
)
from .operations import (
    add,
    interpolate,
    limit_of_sequence,
    mean,
    opposite,
    scalar_mult,
    space_axioms_report,
)
from .banach_mazur import bm_distance
from .isometry import SymmetryBreakError, isometry_group, symmetry_break
from .plotting import write_csv, write_png, write_svg
from .serialize import SchemaError, dump_spec, load_spec, spec_to_dict

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_INPUT = 2
EXIT_DIMENSION = 3
EXIT_COMPUTE = 4

AXIOM_TOL = 1e-9


class _CliInputError(Exception):
    pass


class _CliComputeError(Exception):
    pass


def _compute(fn, *args, **kwargs):
    """Run an underlying operation; its failures are computation errors."""
    try:
        return fn(*args, **kwargs)
    except DimensionMismatch:
        raise
    except QuasinormError as exc:
        raise _CliComputeError(str(exc)) from exc


def _default_resolution(n: int) -> int:
    return 720 if n == 2 else 2000


def _grid_for(args, n: int):
    m = args.grid if args.grid is not None else _default_resolution(n)
    return make_grid(n, m, args.seed)


def _load(path: str):
    if not Path(path).exists():
        raise _CliInputError(f"no such spec file: {path}")
    return load_spec(path)


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _write_spec(spec, out: str | None) -> None:
    if out:
        dump_spec(spec, out)
    else:
        payload = {"schema": 1, **spec_to_dict(spec)}
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _witness_payload(w) -> dict:
    return {
        "mu": w.mu,
        "lambda": w.lam,
        "argmax_dir": [float(c) for c in w.argmax_dir.coords],
        "argmin_dir": [float(c) for c in w.argmin_dir.coords],
        "grid_size": w.grid_size,
        "refined": w.refined,
    }


def _parse_point(raw: str) -> np.ndarray:
    try:
        return np.array([float(tok) for tok in raw.split(",") if tok.strip() != ""])
    except ValueError as exc:
        raise _CliInputError(f"could not parse point {raw!r}: {exc}") from exc


# --------------------------------------------------------------------------
# subcommand bodies


def _cmd_dist(args) -> int:
    x, y = _load(args.spec_x), _load(args.spec_y)
    grid = _grid_for(args, x.dim)
    w = khare_distance(x, y, grid, polish=not args.no_polish)
    _emit(_witness_payload(w), args.out)
    return EXIT_OK


def _cmd_eval(args) -> int:
    spec = _load(args.spec)
    point = _parse_point(args.at)
    _emit({"point": [float(v) for v in point], "value": evaluate(spec, point)},
          args.out)
    return EXIT_OK


def _cmd_binary_op(args) -> int:
    x, y = _load(args.spec_x), _load(args.spec_y)
    if args.command == "interp":
        result = interpolate(x, y, args.theta)
    elif args.command == "mean":
        result = mean(x, y)
    else:
        result = add(x, y)
    _write_spec(result, args.out)
    return EXIT_OK


def _cmd_unary_op(args) -> int:
    x = _load(args.spec)
    if args.command == "opposite":
        result = opposite(x)
    else:
        result = scalar_mult(args.theta, x)
    _write_spec(result, args.out)
    return EXIT_OK


def _cmd_axioms(args) -> int:
    specs = [_load(p) for p in args.specs]
    if len(specs) < 3:
        raise _CliInputError("need >= 3 specs for the axiom suite")
    dims = {s.dim for s in specs}
    if len(dims) != 1:
        raise DimensionMismatch("axiom suite requires specs of one dimension")
    grid = _grid_for(args, dims.pop())
    metric_rep = metric_axioms_report(specs, grid, tol=AXIOM_TOL)
    space_rep = space_axioms_report(specs, grid, seed=args.seed, tol=AXIOM_TOL)
    payload = {
        "metric": dataclasses.asdict(metric_rep),
        "space": dataclasses.asdict(space_rep),
        "tolerance": AXIOM_TOL,
        "passed": metric_rep.passed and space_rep.passed,
    }
    _emit(payload, args.out)
    return EXIT_OK if payload["passed"] else EXIT_PROPERTY


def _cmd_bm(args) -> int:
    x, y = _load(args.spec_x), _load(args.spec_y)
    grid = _grid_for(args, x.dim)
    res = _compute(bm_distance, x, y, grid, starts=args.starts,
                   budget=args.budget, seed=args.seed)
    _emit(
        {
            "distance": res.distance,
            "best_map": [[float(c) for c in row] for row in res.best_map.entries],
            "starts_used": res.starts_used,
            "converged": res.converged,
        },
        args.out,
    )
    return EXIT_OK


def _require_polytope(spec, what: str):
    if not isinstance(spec, Polytope):
        raise _CliInputError(f"{what} requires a polytope spec")
    return spec.ball


def _cmd_iso(args) -> int:
    spec = _load(args.spec)
    grid_res = args.grid if args.grid is not None else 12
    grid = make_grid(spec.dim, grid_res, args.seed)
    if isinstance(spec, Polytope):
        ball = spec.ball
        exact = True
    else:
        ball = _compute(polyhedral_approx, spec, grid, max_vertices=2 * len(grid))
        exact = False
    report = _compute(isometry_group, ball, grid)
    _emit(
        {
            "order": report.order,
            "trivial": report.trivial,
            "exact": exact,
            "elements": [
                [[float(c) for c in row] for row in e.entries]
                for e in report.elements
            ],
            "classifications": [dataclasses.asdict(c) for c in report.classifications],
        },
        args.out,
    )
    return EXIT_OK


def _cmd_break(args) -> int:
    ball = _require_polytope(_load(args.spec), "symmetry breaking")
    result, report, achieved = _compute(symmetry_break, ball, args.epsilon,
                                        seed=args.seed)
    if args.out:
        dump_spec(result, args.out)
    record = {
        "achieved_distance": achieved,
        "target_distance": 1.0 + args.epsilon,
        "group_order": report.order,
        "trivial": report.trivial,
        "written_to": args.out,
    }
    sys.stdout.write(json.dumps(record, indent=2) + "\n")
    return EXIT_OK


def _cmd_approx(args) -> int:
    spec = _load(args.spec)
    grid = _grid_for(args, spec.dim)
    ball = _compute(polyhedral_approx, spec, grid, max_vertices=2 * len(grid))
    _write_spec(Polytope(ball), args.out)
    return EXIT_OK


def _cmd_limit(args) -> int:
    specs = [_load(p) for p in args.specs]
    if len(specs) < 2:
        raise _CliInputError("need >= 2 specs to take a limit")
    dims = {s.dim for s in specs}
    if len(dims) != 1:
        raise DimensionMismatch("limit requires specs of one dimension")
    grid = _grid_for(args, dims.pop())
    profile = _compute(limit_of_sequence, specs, grid, tol=args.tol)
    if args.out:
        dump_spec(from_log_profile(profile), args.out)
    tail_gap = float(
        np.max(np.abs(profile.values - to_log_profile(specs[-1], grid, True).values))
    )
    sys.stdout.write(
        json.dumps(
            {
                "cauchy": True,
                "tolerance": args.tol,
                "grid_size": len(grid),
                "residual_to_last": tail_gap,
                "written_to": args.out,
            },
            indent=2,
        )
        + "\n"
    )
    return EXIT_OK


def _cmd_plot(args) -> int:
    specs = [_load(p) for p in args.specs]
    if any(s.dim != 2 for s in specs):
        raise _CliInputError("plotting supports dimension 2")
    if not args.out:
        raise _CliInputError("plot requires --out")
    labels = [Path(p).stem for p in args.specs]
    fmt = args.format or "svg"
    if fmt == "svg":
        write_svg(specs, labels, args.out)
    elif fmt == "csv":
        write_csv(specs, labels, args.out)
        write_png(specs, labels, str(Path(args.out).with_suffix(".png")))
    else:
        raise _CliInputError("plot supports --format svg or csv")
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def _add_common(p: argparse.ArgumentParser, polish: bool = False) -> None:
    p.add_argument(
        "--grid",
        type=int,
        default=None,
        metavar="M",
        help="grid resolution (default 720 for n=2, 2000 for n=3)",
    )
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--out", default=None, metavar="PATH", help="output file")
    p.add_argument(
        "--format",
        choices=("json", "csv", "svg"),
        default=None,
        help="output format where applicable",
    )
    if polish:
        p.add_argument(
            "--no-polish",
            action="store_true",
            help="skip local witness refinement (default: polish on)",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="normspace",
        description="computable geometry of continuous quasinorms modulo dilation",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", help="multiplicative distance between two specs")
    p.add_argument("spec_x")
    p.add_argument("spec_y")
    _add_common(p, polish=True)
    p.set_defaults(func=_cmd_dist)

    p = sub.add_parser("eval", help="evaluate a spec at a point")
    p.add_argument("spec")
    p.add_argument("--at", required=True, metavar="X1,X2,...", help="point coordinates")
    _add_common(p)
    p.set_defaults(func=_cmd_eval)

    for name, helptext in (
        ("interp", "geometric interpolation of two specs"),
        ("mean", "midpoint (theta = 1/2 interpolation) of two specs"),
        ("add", "class addition of two specs"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("spec_x")
        p.add_argument("spec_y")
        if name == "interp":
            p.add_argument("--theta", type=float, required=True,
                           help="weight in [0, 1]")
        _add_common(p)
        p.set_defaults(func=_cmd_binary_op)

    for name, helptext in (
        ("opposite", "class inverse of a spec"),
        ("scale", "scalar action theta * [spec]"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("spec")
        if name == "scale":
            p.add_argument("--theta", type=float, required=True,
                           help="any real scalar")
        _add_common(p)
        p.set_defaults(func=_cmd_unary_op)

    p = sub.add_parser("axioms", help="metric and linear-space axiom suite")
    p.add_argument("specs", nargs="+")
    _add_common(p)
    p.set_defaults(func=_cmd_axioms)

    p = sub.add_parser("bm", help="Banach-Mazur distance estimate")
    p.add_argument("spec_x")
    p.add_argument("spec_y")
    p.add_argument("--starts", type=int, default=16, help="optimizer starts")
    p.add_argument("--budget", type=int, default=2000,
                   help="objective evaluations per start")
    _add_common(p)
    p.set_defaults(func=_cmd_bm)

    p = sub.add_parser("iso", help="autoisometry group of a polytope spec")
    p.add_argument("spec")
    _add_common(p)
    p.set_defaults(func=_cmd_iso)

    p = sub.add_parser("break", help="perturb a polytope gauge to a trivial group")
    p.add_argument("spec")
    p.add_argument("--epsilon", type=float, default=0.05,
                   help="multiplicative distance budget")
    _add_common(p)
    p.set_defaults(func=_cmd_break)

    p = sub.add_parser("approx", help="inscribed polyhedral approximation")
    p.add_argument("spec")
    _add_common(p)
    p.set_defaults(func=_cmd_approx)

    p = sub.add_parser("limit", help="limit profile of a Cauchy sequence of specs")
    p.add_argument("specs", nargs="+")
    p.add_argument("--tol", type=float, default=1e-3, help="Cauchy tolerance")
    _add_common(p)
    p.set_defaults(func=_cmd_limit)

    p = sub.add_parser("plot", help="unit-sphere figure for planar specs")
    p.add_argument("specs", nargs="+")
    _add_common(p)
    p.set_defaults(func=_cmd_plot)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DimensionMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except (_CliComputeError, SymmetryBreakError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except (
        SchemaError,
        BallValidationError,
        ProjectiveError,
        QuasinormError,
        _CliInputError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
