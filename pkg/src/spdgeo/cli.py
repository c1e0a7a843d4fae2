"""Command-line front end.

Subcommands:

* ``interp``                one geodesic point between two single-tensor files
* ``upsample``              grid upsampling of a tensor-field file
* ``swelling``              determinant-root profiles of two metrics side by side
* ``verify``                seeded property campaigns over random ensembles
* ``search-extrapolation``  witness search for the non-ordering outside [0, 1]

Data goes to stdout (or ``--out``); diagnostics go to stderr.  Exit status
0 means success, 1 means a property violation was found (or an expected
witness was not), 2 means an input or validation problem.

For ``interp`` and ``swelling``, ``--p`` runs from tensor A (p = 0) to
tensor B (p = 1).
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import SpdGeoError
from .field import load_field, load_tensor, pack_tensor, save_field, upsample_field
from .geodesics import GeodesicSpec, MetricKind, swelling_profile, path_point
from .verify import (
    DEFAULT_EXTRAPOLATION_P,
    EnsembleSpec,
    PropertyId,
    RankMode,
    reports_to_csv,
    reports_to_json,
    run_all,
    search_extrapolation_counterexamples,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2

_METRICS = [m.value for m in MetricKind]
_PROPERTIES = [p.value for p in PropertyId]


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _log(message: str) -> None:
    print(message, file=sys.stderr)


def cmd_interp(args) -> int:
    a = load_tensor(args.tensor_a)
    b = load_tensor(args.tensor_b)
    spec = GeodesicSpec(MetricKind(args.metric), endpoint_a=b, endpoint_b=a)
    result = path_point(spec, args.p)
    packed = pack_tensor(result)
    if args.format == "json":
        _emit(json.dumps(packed) + "\n", args.out)
    else:
        _emit("xx,xy,xz,yy,yz,zz\n" + ",".join(_fmt(v) for v in packed) + "\n", args.out)
    return EXIT_OK


def cmd_upsample(args) -> int:
    fld = load_field(args.input)
    result = upsample_field(fld, args.factor, MetricKind(args.metric))
    save_field(result, args.output)
    _log(f"upsampled {fld.dims} -> {result.dims} ({result.voxel_count} voxels)")
    return EXIT_OK


def cmd_swelling(args) -> int:
    metrics = [MetricKind(m.strip()) for m in args.metrics.split(",") if m.strip()]
    if not metrics:
        raise SpdGeoError("at least one metric is required")
    a = load_tensor(args.tensor_a)
    b = load_tensor(args.tensor_b)
    profiles = {}
    for metric in metrics:
        spec = GeodesicSpec(metric, endpoint_a=b, endpoint_b=a)
        profiles[metric.value] = swelling_profile(spec, args.steps)
    grid = [p for p, _ in next(iter(profiles.values()))]
    violations = []
    if MetricKind.PROCRUSTES in metrics and MetricKind.EUCLIDEAN_ROOT in metrics:
        er = dict(profiles[MetricKind.EUCLIDEAN_ROOT.value])
        pr = dict(profiles[MetricKind.PROCRUSTES.value])
        for p in grid:
            if pr[p] > er[p] * (1.0 + 1e-9) + 1e-10 * max(1.0, er[p]):
                violations.append(p)
    if args.format == "json":
        payload = {
            "p": grid,
            "det_root": {name: [v for _, v in prof] for name, prof in profiles.items()},
            "violations": violations,
        }
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    else:
        names = [m.value for m in metrics]
        lines = [",".join(["p"] + names)]
        for i, p in enumerate(grid):
            lines.append(",".join([_fmt(p)] + [_fmt(profiles[n][i][1]) for n in names]))
        _emit("\n".join(lines) + "\n", args.out)
    if violations:
        _log(
            "swelling order violated: procrustes exceeds euclidean-root at p = "
            + ", ".join(_fmt(p) for p in violations)
        )
        return EXIT_VIOLATION
    if MetricKind.PROCRUSTES in metrics and MetricKind.EUCLIDEAN_ROOT in metrics:
        _log(f"swelling order holds at all {len(grid)} grid points")
    return EXIT_OK


def _parse_properties(text: str) -> list[PropertyId] | None:
    if text == "all":
        return None
    try:
        return [PropertyId(part.strip()) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise SpdGeoError(f"unknown property: {exc}") from exc


def cmd_verify(args) -> int:
    spec = EnsembleSpec(
        dim=args.dim,
        trials=args.trials,
        seed=args.seed,
        rank_mode=RankMode(args.rank_mode),
    )
    properties = _parse_properties(args.properties)
    reports = run_all(spec, properties, invert_hook=args.hook_invert)
    text = reports_to_json(reports) if args.format == "json" else reports_to_csv(reports)
    _emit(text, args.out)
    for r in reports:
        status = "pass" if r.passed else "FAIL"
        _log(
            f"{status}  {r.property.value}: {r.trials_run} trials, "
            f"{r.failures} failures, {r.near_misses} near misses, "
            f"worst margin {r.worst_margin:.3g}"
        )
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VIOLATION


def cmd_search_extrapolation(args) -> int:
    try:
        p_values = tuple(float(part) for part in args.p.split(",") if part.strip())
    except ValueError as exc:
        raise SpdGeoError(f"bad --p list: {exc}") from exc
    spec = EnsembleSpec(
        dim=args.dim,
        trials=args.trials,
        seed=args.seed,
        rank_mode=RankMode(args.rank_mode),
    )
    try:
        report = search_extrapolation_counterexamples(spec, p_values)
    except ValueError as exc:
        raise SpdGeoError(str(exc)) from exc
    text = reports_to_json([report]) if args.format == "json" else reports_to_csv([report])
    _emit(text, args.out)
    d = report.details
    _log(
        f"positive-difference witnesses: {d['positive_count']}, "
        f"negative-difference witnesses: {d['negative_count']}"
    )
    if report.passed:
        _log("both signs found: determinants are not ordered under extrapolation")
        return EXIT_OK
    _log("witness search incomplete: a sign is missing at the requested magnitude")
    return EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spdgeo",
        description="Geodesic interpolation of PSD tensors and numerical "
        "verification of the determinant inequalities behind it.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_interp = sub.add_parser("interp", help="interpolate/extrapolate between two tensors")
    p_interp.add_argument("--metric", choices=_METRICS, required=True)
    p_interp.add_argument("--p", type=float, required=True,
                          help="path parameter: 0 gives tensor A, 1 gives tensor B")
    p_interp.add_argument("--format", choices=["json", "csv"], default="json")
    p_interp.add_argument("--out", default=None)
    p_interp.add_argument("tensor_a")
    p_interp.add_argument("tensor_b")
    p_interp.set_defaults(func=cmd_interp)

    p_up = sub.add_parser("upsample", help="upsample a tensor field along each axis")
    p_up.add_argument("--metric", choices=_METRICS, required=True)
    p_up.add_argument("--factor", type=int, required=True)
    p_up.add_argument("input")
    p_up.add_argument("output")
    p_up.set_defaults(func=cmd_upsample)

    p_sw = sub.add_parser("swelling", help="determinant-root profile of geodesic paths")
    p_sw.add_argument("--metrics", default="euclidean-root,procrustes",
                      help="comma-separated metric list")
    p_sw.add_argument("--steps", type=int, default=21)
    p_sw.add_argument("--format", choices=["json", "csv"], default="csv")
    p_sw.add_argument("--out", default=None)
    p_sw.add_argument("tensor_a")
    p_sw.add_argument("tensor_b")
    p_sw.set_defaults(func=cmd_swelling)

    p_ver = sub.add_parser("verify", help="run property campaigns on random ensembles")
    p_ver.add_argument("--trials", type=int, default=1000)
    p_ver.add_argument("--dim", type=int, default=3)
    p_ver.add_argument("--seed", type=int, default=42)
    p_ver.add_argument("--rank-mode", choices=[m.value for m in RankMode], default="mixed")
    p_ver.add_argument("--properties", default="all",
                       help="comma-separated property list, or 'all'; "
                       f"known: {', '.join(_PROPERTIES)}")
    p_ver.add_argument("--format", choices=["json", "csv"], default="json")
    p_ver.add_argument("--out", default=None)
    p_ver.add_argument("--hook-invert", action="store_true", help=argparse.SUPPRESS)
    p_ver.set_defaults(func=cmd_verify)

    p_se = sub.add_parser("search-extrapolation",
                          help="find witnesses of both signs outside [0, 1]")
    p_se.add_argument("--trials", type=int, default=10000)
    p_se.add_argument("--dim", type=int, default=3)
    p_se.add_argument("--seed", type=int, default=42)
    p_se.add_argument("--rank-mode", choices=[m.value for m in RankMode], default="full")
    p_se.add_argument("--p", default=",".join(str(p) for p in DEFAULT_EXTRAPOLATION_P),
                      help="comma-separated p values, all outside [0, 1]")
    p_se.add_argument("--format", choices=["json", "csv"], default="json")
    p_se.add_argument("--out", default=None)
    p_se.set_defaults(func=cmd_search_extrapolation)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpdGeoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
