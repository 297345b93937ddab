"""Command line interface.

Exit codes: 0 on success, 2 when a checked inequality fails beyond
tolerance, 1 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .bodies import (
    AngleGrid,
    FourierBody,
    Polygon,
    area,
    is_origin_symmetric,
    mixed_area,
    polar,
    stats,
    support_values,
)
from .chain import verify_proof_chain
from .errors import ConvexLabError
from .families import generate_family, parse_family_spec
from .fileio import (
    flow_lines,
    read_body,
    read_manifest,
    read_records,
    write_manifest,
    write_records,
)
from .metrics import bm_distance_disk, bm_distance_pair
from .minkowski import lambda_body, lutwak_gap, mollify
from .plotting import plot_sweep
from .santalo import santalo_point, volume_product
from .steiner import meyer_pajor_gap, steiner_symmetral, symmetrization_flow
from .sweep import exponent_fit, stability_sweep

# violation thresholds for the checked inequalities
DEFICIT_FLOOR = -1e-8
LUTWAK_FLOOR = -1e-8
AREA_RATIO_CEIL = 1.0 + 1e-8
MEYER_PAJOR_FLOOR = -1e-7


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1; 2 is reserved for inequality violations
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="convexlab",
                     description="planar convex-geometry laboratory")
    parser.add_argument("--grid", type=int, default=1024,
                        help="angular grid size (default 1024)")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for multistart searches")
    parser.add_argument("--tol", type=float, default=1e-9,
                        help="verification tolerance")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("body", help="inspect a body file")
    p.add_argument("action", choices=("info", "polar", "stats"))
    p.add_argument("file")

    p = sub.add_parser("santalo", help="Santalo point and volume product")
    p.add_argument("file")

    p = sub.add_parser("lambda", help="Lambda body and the Lutwak bound")
    p.add_argument("file")

    p = sub.add_parser("bm", help="Banach-Mazur distance estimate")
    p.add_argument("file")
    p.add_argument("--pair", help="second body file; distance between the "
                                  "two instead of to the disk")

    p = sub.add_parser("steiner", help="Steiner symmetrization")
    p.add_argument("file")
    p.add_argument("--axis", required=True,
                   help="axis angle in radians; comma-separate for a cycle")
    p.add_argument("--steps", type=int,
                   help="run a symmetrization flow of this many steps")

    p = sub.add_parser("sweep", help="deficit sweep over a body family")
    p.add_argument("--family", required=True,
                   help="family spec, e.g. mode:k=4,lo=0.002,hi=0.02,count=10")
    p.add_argument("--out", required=True, help="output CSV path")

    p = sub.add_parser("fit", help="stability exponent fit of a sweep CSV")
    p.add_argument("csv")
    p.add_argument("--general", action="store_true",
                   help="force the general-branch gamma (deficit^(1/4))")

    p = sub.add_parser("chain", help="verify the deficit-to-distance chain")
    p.add_argument("file")

    p = sub.add_parser("plot", help="render a sweep CSV to SVG")
    p.add_argument("csv")
    p.add_argument("--out", required=True, help="output SVG path")
    return parser


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _cmd_body(args, grid: AngleGrid) -> int:
    body = read_body(args.file)
    if args.action == "info":
        kind = type(body).__name__.lower()
        print(f"label {body.label or '-'}")
        print(f"kind {kind}")
        if isinstance(body, Polygon):
            print(f"vertices {len(body.vertices)}")
        elif isinstance(body, FourierBody):
            print(f"degree {body.k_max}")
        print(f"area {_fmt(area(body))}")
        print(f"origin_symmetric "
              f"{'yes' if is_origin_symmetric(body, grid) else 'no'}")
        return 0
    if args.action == "polar":
        dual = polar(body, grid)
        h = support_values(dual, grid)
        print(f"kind {type(dual).__name__.lower()}")
        print(f"area {_fmt(area(dual))}")
        print(f"support_min {_fmt(float(np.min(h)))}")
        print(f"support_max {_fmt(float(np.max(h)))}")
        return 0
    st = stats(body, grid)
    for name in ("area", "perimeter", "d_groemer", "h_min", "h_max"):
        print(f"{name} {_fmt(getattr(st, name))}")
    return 0


def _cmd_santalo(args, grid: AngleGrid) -> int:
    body = read_body(args.file)
    res = santalo_point(body, grid)
    vp = volume_product(body, grid, res)
    print(f"santalo_point {_fmt(res.point[0])} {_fmt(res.point[1])}")
    print(f"polar_area {_fmt(res.polar_area)}")
    print(f"volume_product {_fmt(vp)}")
    print(f"deficit {_fmt(np.pi**2 / vp - 1.0)}")
    return 0


def _cmd_lambda(args, grid: AngleGrid) -> int:
    body = read_body(args.file)
    # the construction needs a smooth curvature function; smooth here so
    # every printed quantity refers to one and the same body
    mollified = (not isinstance(body, FourierBody)
                 or body.k_max > grid.n // 4)
    work = mollify(body, grid, k_cap=grid.n // 4) if mollified else body
    lam = lambda_body(work, grid)
    v_k, v_l = area(work), area(lam)
    ratio = v_l / v_k
    bound = lutwak_gap(work, grid)
    print(f"mollified {'yes' if mollified else 'no'}")
    print(f"area {_fmt(v_k)}")
    print(f"lambda_area {_fmt(v_l)}")
    print(f"area_ratio {_fmt(ratio)}")
    print(f"mixed_area_residual "
          f"{_fmt(abs(mixed_area(work, lam, grid) - v_k))}")
    print(f"volume_product {_fmt(bound.volume_product)}")
    print(f"lutwak_bound {_fmt(bound.bound)}")
    print(f"lutwak_gap {_fmt(bound.gap)}")
    if ratio > AREA_RATIO_CEIL or bound.gap < LUTWAK_FLOOR:
        print("violation: Lambda-body inequality failed", file=sys.stderr)
        return 2
    return 0


def _cmd_bm(args, grid: AngleGrid) -> int:
    body = read_body(args.file)
    if args.pair:
        est = bm_distance_pair(body, read_body(args.pair), grid,
                               seed=args.seed)
    else:
        est = bm_distance_disk(body, grid, seed=args.seed)
    print(f"distance {_fmt(est.distance)}")
    print(f"spread {_fmt(est.multistart_spread)}")
    print(f"scale {_fmt(est.scale)}")
    return 0


def _cmd_steiner(args, grid: AngleGrid) -> int:
    body = read_body(args.file)
    axes = [float(part) for part in args.axis.split(",")]
    if args.steps is not None:
        hist = symmetrization_flow(body, axes, args.steps, grid)
        for line in flow_lines(hist):
            print(line)
        return 0
    gaps = []
    current = body
    for axis in axes:
        gaps.append(meyer_pajor_gap(current, axis, grid))
        current = steiner_symmetral(current, axis, grid)
    print(f"area_before {_fmt(area(body))}")
    print(f"area_after {_fmt(area(current))}")
    print(f"vertices {len(current.vertices)}")
    for axis, gap in zip(axes, gaps):
        print(f"meyer_pajor_gap axis={_fmt(axis)} {_fmt(gap)}")
    if min(gaps) < MEYER_PAJOR_FLOOR:
        print("violation: polar area decreased under symmetrization",
              file=sys.stderr)
        return 2
    return 0


def _cmd_sweep(args, grid: AngleGrid) -> int:
    spec = parse_family_spec(args.family)
    bodies = generate_family(spec, grid)
    result = stability_sweep(bodies, grid=grid, seed=args.seed,
                             params=spec.param_values(), spec=spec)
    write_records(args.out, result.records)
    manifest = write_manifest(args.out, {
        "command": "sweep",
        "family": spec.text,
        "grid": grid.n,
        "seed": args.seed,
        "tol": args.tol,
        "symmetric": result.symmetric,
        "record_count": len(result.records),
        "fitted_slope": result.fitted_slope,
        "fitted_gamma": result.fitted_gamma,
    })
    print(f"records {len(result.records)}")
    print(f"symmetric {'yes' if result.symmetric else 'no'}")
    print(f"fitted_slope {_fmt(result.fitted_slope)}")
    print(f"fitted_gamma {_fmt(result.fitted_gamma)}")
    print(f"csv {args.out}")
    print(f"manifest {manifest}")
    worst = min(r.epsilon for r in result.records)
    if worst < DEFICIT_FLOOR:
        print(f"violation: volume product exceeds the disk bound "
              f"(deficit {worst:.3e})", file=sys.stderr)
        return 2
    return 0


def _fit_branch(args) -> bool:
    if args.general:
        return False
    manifest = read_manifest(args.csv)
    if manifest is not None and "symmetric" in manifest:
        return bool(manifest["symmetric"])
    return True


def _cmd_fit(args, grid: AngleGrid) -> int:
    records = read_records(args.csv)
    symmetric = _fit_branch(args)
    fit = exponent_fit(records, symmetric=symmetric)
    print(f"records {len(records)}")
    print(f"symmetric {'yes' if symmetric else 'no'}")
    print(f"slope {_fmt(fit.slope)}")
    print(f"intercept {_fmt(fit.intercept)}")
    print(f"gamma {_fmt(fit.gamma)}")
    print(f"residual {_fmt(fit.residual)}")
    return 0


def _cmd_chain(args, grid: AngleGrid) -> int:
    report = verify_proof_chain(read_body(args.file), grid, tol=args.tol,
                                seed=args.seed)
    for line in report.lines():
        print(line)
    return 0 if report.passed else 2


def _cmd_plot(args, grid: AngleGrid) -> int:
    records = read_records(args.csv)
    manifest = read_manifest(args.csv)
    fit = None
    try:
        symmetric = True if manifest is None else bool(
            manifest.get("symmetric", True))
        fit = exponent_fit(records, symmetric=symmetric)
    except ConvexLabError:
        pass
    title = manifest.get("family") if manifest else None
    plot_sweep(records, args.out, fit=fit, title=title)
    print(f"svg {args.out}")
    return 0


_COMMANDS = {
    "body": _cmd_body,
    "santalo": _cmd_santalo,
    "lambda": _cmd_lambda,
    "bm": _cmd_bm,
    "steiner": _cmd_steiner,
    "sweep": _cmd_sweep,
    "fit": _cmd_fit,
    "chain": _cmd_chain,
    "plot": _cmd_plot,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        grid = AngleGrid(args.grid)
        return _COMMANDS[args.command](args, grid)
    except ConvexLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
