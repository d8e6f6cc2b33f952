"""Command-line front-end.

JSON in, JSON or CSV out, with byte-stable formatting so outputs diff
cleanly.  Exit codes: 0 success, 2 schema/validation error (the
diagnostic names the offending field), 3 numerical failure
(non-convergence, domain escape, infinite divergence).  Set
``QAM_LOG=info|debug`` for diagnostics on standard error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from . import checks
from .averages import dual_qaa, power_mean_spec, qaa, scalar_qam
from .divergences import divergence_report
from .dually_flat import (
    dual_geodesic_point,
    jensen_barycenter,
    left_centroid,
    lift_point,
    primal_geodesic_point,
    right_centroid,
)
from .errors import (
    ConvergenceError,
    DomainError,
    InfiniteDivergenceError,
    ValidationError,
)
from .generators import build_generator
from .mixtures import (
    AlphaGeodesicConfig,
    alpha_geodesic_path,
    generalized_jsd,
    hjsd,
    jsd,
    nabla_alpha_jsd,
    qamix,
)
from .serialize import (
    dumps_csv,
    dumps_json,
    load_json_arg,
    matrix_payload,
    parse_generator_spec,
    parse_matrix,
    parse_number_list,
    parse_points,
    parse_scalar_mean_spec,
)
from .spd import ahm_geometric, spd_geometric_closed

_FORMATS = {
    "mean": ("json",),
    "average": ("json",),
    "divergence": ("json",),
    "geodesic": ("csv",),
    "centroid": ("json",),
    "barycenter": ("json",),
    "spd-geomean": ("json",),
    "mix": ("json",),
    "jsd": ("json",),
    "simplex-geodesic": ("csv",),
    "check": ("json",),
}


def _configure_logging():
    level = {"quiet": logging.WARNING, "info": logging.INFO,
             "debug": logging.DEBUG}.get(os.environ.get("QAM_LOG", "quiet"))
    if level is None:
        level = logging.WARNING
    root = logging.getLogger("qamlib")
    root.setLevel(level)
    if not root.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
        root.addHandler(handler)


def _parse_point(arg: str, field: str):
    text = arg.strip()
    if text.startswith("{") or text.startswith("[") or os.path.exists(arg):
        obj = load_json_arg(arg, field)
        if isinstance(obj, dict):
            return parse_matrix(obj, field)
        pt = np.asarray(obj, dtype=float)
        if pt.ndim != 1:
            raise ValidationError("point must be a flat array", field=field)
        return pt
    return parse_number_list(arg, field)


def _point_payload(point):
    point = np.asarray(point, dtype=float)
    if point.ndim == 2:
        return matrix_payload(point)
    return point


def _gen_from_arg(arg: str):
    return build_generator(parse_generator_spec(load_json_arg(arg, "gen")))


def _spec_from_arg(arg: str, field: str = "spec"):
    return parse_scalar_mean_spec(load_json_arg(arg, field), field=field)


# ---------------------------------------------------------------------------
# Handlers
# ---------------------------------------------------------------------------


def _handle_mean(args):
    spec = _spec_from_arg(args.spec)
    xs = parse_number_list(args.xs, "xs")
    w = parse_number_list(args.w, "w")
    return dumps_json({"value": scalar_qam(spec, xs, w)})


def _handle_average(args):
    gen = _gen_from_arg(args.gen)
    points = parse_points(load_json_arg(args.points, "points"), "points")
    w = parse_number_list(args.w, "w")
    value = dual_qaa(gen, points, w) if args.dual else qaa(gen, points, w)
    return dumps_json({"value": _point_payload(value)})


def _handle_divergence(args):
    gen = _gen_from_arg(args.gen)
    first = _parse_point(args.theta1, "theta1")
    second = _parse_point(args.theta2, "theta2")
    report = divergence_report(gen, args.kind, first, second)
    payload = {"kind": report.kind, "value": report.value}
    parts = {}
    if report.left is not None:
        parts["left"] = report.left
    if report.right is not None:
        parts["right"] = report.right
    if report.inner is not None:
        parts["inner"] = report.inner
    if parts:
        payload["parts"] = parts
    return dumps_json(payload)


def _handle_geodesic(args):
    gen = _gen_from_arg(args.gen)
    p = lift_point(gen, _parse_point(args.p, "p"))
    q = lift_point(gen, _parse_point(args.q, "q"))
    if args.samples < 1:
        raise ValidationError("samples must be positive", field="samples")
    step = primal_geodesic_point if args.connection == "primal" \
        else dual_geodesic_point
    rows = []
    for i in range(args.samples + 1):
        t = i / args.samples
        pt = step(gen, p, q, t)
        rows.append([t, *np.asarray(pt.theta).reshape(-1),
                     *np.asarray(pt.eta).reshape(-1)])
    n_coord = np.asarray(p.theta).size
    header = (["t"] + [f"theta_{k + 1}" for k in range(n_coord)]
              + [f"eta_{k + 1}" for k in range(n_coord)])
    return dumps_csv(header, rows)


def _handle_centroid(args):
    gen = _gen_from_arg(args.gen)
    points = parse_points(load_json_arg(args.points, "points"), "points")
    w = parse_number_list(args.w, "w")
    lifted = [lift_point(gen, t) for t in points]
    side = left_centroid if args.side == "left" else right_centroid
    result = side(gen, lifted, w)
    return dumps_json({"side": args.side,
                       "theta": _point_payload(result.theta),
                       "eta": _point_payload(result.eta)})


def _handle_barycenter(args):
    gen = _gen_from_arg(args.gen)
    points = parse_points(load_json_arg(args.points, "points"), "points")
    w = parse_number_list(args.w, "w")
    trace = jensen_barycenter(gen, points, w, tol=args.tol,
                              max_iter=args.max_iter)
    if not trace.converged:
        raise ConvergenceError(
            f"barycenter did not converge within {trace.iterations} iterations; "
            f"final residual {trace.residuals[-1]:.3e}", trace=trace)
    return dumps_json({"theta": _point_payload(trace.point),
                       "residual": trace.residuals[-1],
                       "iterations": trace.iterations,
                       "converged": trace.converged})


def _handle_spd_geomean(args):
    p = parse_matrix(load_json_arg(args.p, "p"), "p")
    q = parse_matrix(load_json_arg(args.q, "q"), "q")
    if args.method == "closed":
        return dumps_json({"method": "closed",
                           "limit": matrix_payload(spd_geometric_closed(p, q))})
    trace = ahm_geometric(p, q, tol=args.tol, max_iter=args.max_iter)
    if not trace.converged:
        raise ConvergenceError(
            f"arithmetic-harmonic iteration did not reach tol={args.tol:g} in "
            f"{trace.iterations} iterations; final gap {trace.gaps[-1]:.3e}",
            trace=trace)
    return dumps_json({"method": "ahm",
                       "limit": matrix_payload(trace.limit),
                       "iterations": trace.iterations,
                       "final_gap": trace.gaps[-1]})


def _handle_mix(args):
    spec = _spec_from_arg(args.spec)
    densities = load_json_arg(args.densities, "densities")
    if not isinstance(densities, list):
        raise ValidationError("densities must be a JSON array of arrays",
                              field="densities")
    w = parse_number_list(args.w, "w")
    mixed, z = qamix(spec, [np.asarray(d, dtype=float) for d in densities],
                     w, return_normalizer=True)
    return dumps_json({"density": mixed, "normalizer": z})


def _handle_jsd(args):
    p = parse_number_list(args.p, "p")
    q = parse_number_list(args.q, "q")
    if args.kind == "jsd":
        return dumps_json({"kind": "jsd", "value": jsd(p, q)})
    if args.kind == "generalized":
        if args.spec is None:
            raise ValidationError("generalized JSD needs --spec", field="spec")
        value = generalized_jsd(_spec_from_arg(args.spec), p, q)
        return dumps_json({"kind": "generalized", "value": value})
    if args.kind == "hjsd":
        if args.spec is None or args.g_spec is None:
            raise ValidationError("entropy-form JSD needs --spec and --g-spec",
                                  field="spec")
        value = hjsd(_spec_from_arg(args.spec),
                     _spec_from_arg(args.g_spec, field="g-spec"), p, q)
        return dumps_json({"kind": "hjsd", "value": value,
                           "may_be_negative": True})
    if args.alpha is None:
        raise ValidationError("connection-based JSD needs --alpha", field="alpha")
    cfg = AlphaGeodesicConfig(alpha=args.alpha, grid_size=args.grid)
    value = nabla_alpha_jsd(p, q, alpha=args.alpha, beta=args.beta, cfg=cfg)
    return dumps_json({"kind": "nabla", "alpha": args.alpha, "beta": args.beta,
                       "value": value})


def _handle_simplex_geodesic(args):
    p = parse_number_list(args.p, "p")
    q = parse_number_list(args.q, "q")
    if args.samples < 16 and abs(args.alpha) != 1.0:
        raise ValidationError("samples must be at least 16 for the grid solver",
                              field="samples")
    cfg = AlphaGeodesicConfig(alpha=args.alpha, grid_size=max(args.samples, 16),
                              tol=args.tol)
    ts, path = alpha_geodesic_path(p, q, cfg)
    header = ["t"] + [f"p{k + 1}" for k in range(path.shape[1])]
    rows = [[t, *row] for t, row in zip(ts, path)]
    return dumps_csv(header, rows)


def _handle_check(args):
    return dumps_json(checks.run_suite(args.suite))


# ---------------------------------------------------------------------------
# Parser and dispatch
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qam",
        description="Quasi-arithmetic means, averages, dually flat geometry, "
                    "SPD matrix means, and quasi-arithmetic mixtures.")
    sub = parser.add_subparsers(dest="command")

    def common(sp, default_format):
        sp.add_argument("--output", default="-",
                        help="output path, or - for stdout")
        sp.add_argument("--format", default=default_format,
                        choices=("json", "csv"), help="output format")

    sp = sub.add_parser("mean", help="scalar quasi-arithmetic mean")
    sp.add_argument("--spec", required=True, help="scalar mean spec (JSON)")
    sp.add_argument("--xs", required=True, help="comma-separated values")
    sp.add_argument("--w", required=True, help="comma-separated weights")
    common(sp, "json")
    sp.set_defaults(handler=_handle_mean)

    sp = sub.add_parser("average", help="quasi-arithmetic average of points")
    sp.add_argument("--gen", required=True, help="generator spec (JSON)")
    sp.add_argument("--points", required=True, help="JSON array of points")
    sp.add_argument("--w", required=True)
    sp.add_argument("--dual", action="store_true",
                    help="average dual points with the conjugate gradient map")
    common(sp, "json")
    sp.set_defaults(handler=_handle_average)

    sp = sub.add_parser("divergence", help="divergences induced by a generator")
    sp.add_argument("--gen", required=True)
    sp.add_argument("--kind", required=True,
                    choices=("bregman", "fenchel_young", "jeffreys", "jensen"))
    sp.add_argument("--theta1", required=True)
    sp.add_argument("--theta2", required=True,
                    help="second point (a dual point for fenchel_young)")
    common(sp, "json")
    sp.set_defaults(handler=_handle_divergence)

    sp = sub.add_parser("geodesic", help="sample a primal or dual geodesic")
    sp.add_argument("--gen", required=True)
    sp.add_argument("--p", required=True, help="first endpoint (theta chart)")
    sp.add_argument("--q", required=True, help="second endpoint (theta chart)")
    sp.add_argument("--connection", default="primal",
                    choices=("primal", "dual"))
    sp.add_argument("--samples", type=int, default=16)
    common(sp, "csv")
    sp.set_defaults(handler=_handle_geodesic)

    sp = sub.add_parser("centroid", help="sided Bregman centroid")
    sp.add_argument("--gen", required=True)
    sp.add_argument("--points", required=True)
    sp.add_argument("--w", required=True)
    sp.add_argument("--side", default="right", choices=("left", "right"))
    common(sp, "json")
    sp.set_defaults(handler=_handle_centroid)

    sp = sub.add_parser("barycenter", help="Jensen-divergence barycenter")
    sp.add_argument("--gen", required=True)
    sp.add_argument("--points", required=True)
    sp.add_argument("--w", required=True)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--max-iter", type=int, default=200)
    common(sp, "json")
    sp.set_defaults(handler=_handle_barycenter)

    sp = sub.add_parser("spd-geomean", help="geometric mean of two SPD matrices")
    sp.add_argument("--p", required=True, help="matrix JSON or path")
    sp.add_argument("--q", required=True, help="matrix JSON or path")
    sp.add_argument("--method", default="ahm", choices=("ahm", "closed"))
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.add_argument("--max-iter", type=int, default=60)
    common(sp, "json")
    sp.set_defaults(handler=_handle_spd_geomean)

    sp = sub.add_parser("mix", help="quasi-arithmetic mixture of densities")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--densities", required=True,
                    help="JSON array of densities")
    sp.add_argument("--w", required=True)
    common(sp, "json")
    sp.set_defaults(handler=_handle_mix)

    sp = sub.add_parser("jsd", help="Jensen-Shannon divergences")
    sp.add_argument("--p", required=True)
    sp.add_argument("--q", required=True)
    sp.add_argument("--kind", default="jsd",
                    choices=("jsd", "generalized", "hjsd", "nabla"))
    sp.add_argument("--spec", help="mixture mean spec (generalized, hjsd)")
    sp.add_argument("--g-spec", help="value mean spec (hjsd)")
    sp.add_argument("--alpha", type=float, help="connection (nabla)")
    sp.add_argument("--beta", type=float, default=0.5, help="skew (nabla)")
    sp.add_argument("--grid", type=int, default=256,
                    help="grid size for the geodesic solver (nabla)")
    common(sp, "json")
    sp.set_defaults(handler=_handle_jsd)

    sp = sub.add_parser("simplex-geodesic",
                        help="sample an alpha-connection geodesic on the simplex")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--p", required=True)
    sp.add_argument("--q", required=True)
    sp.add_argument("--samples", type=int, default=64)
    sp.add_argument("--tol", type=float, default=1e-9)
    common(sp, "csv")
    sp.set_defaults(handler=_handle_simplex_geodesic)

    sp = sub.add_parser("check", help="run a property suite")
    sp.add_argument("suite", choices=checks.SUITES)
    common(sp, "json")
    sp.set_defaults(handler=_handle_check)

    return parser


def _write_output(text: str, target: str):
    if target in ("-", ""):
        sys.stdout.write(text)
    else:
        with open(target, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def run(argv) -> int:
    """Dispatch one CLI invocation; returns the process exit code."""
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if code else 0
    if getattr(args, "command", None) is None:
        parser.print_usage(sys.stderr)
        return 2
    if args.format not in _FORMATS[args.command]:
        print(f"qam {args.command}: invalid input (field: format): "
              f"{args.format!r} output is not available here", file=sys.stderr)
        return 2
    try:
        text = args.handler(args)
    except ValidationError as exc:
        field = f" (field: {exc.field})" if exc.field else ""
        print(f"qam {args.command}: invalid input{field}: {exc}",
              file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"qam {args.command}: domain violation: {exc}", file=sys.stderr)
        return 2
    except InfiniteDivergenceError as exc:
        print(f"qam {args.command}: numerical failure: {exc}", file=sys.stderr)
        return 3
    except ConvergenceError as exc:
        print(f"qam {args.command}: numerical failure: {exc}", file=sys.stderr)
        return 3
    _write_output(text, args.output)
    return 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
