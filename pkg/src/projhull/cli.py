"""Command-line front end: curve construction, hull scans, the counterexample
verifier, disk checks/optimization, and Blaschke utilities.

Exit codes: 0 success / all checks pass, 1 check failure, 2 usage or
validation error, 3 resource/cap violation.  Outputs are byte-stable given
equal configs (17 significant digits in JSON, 12 in CSV).
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import __version__
from ._jsonio import fmt12, json_dumps, write_json
from .curves import (
    PoleSeriesParams,
    build_curve,
    curve_from_json,
    curve_to_json,
    tail_bound,
)
from .disks import (
    BlaschkeProduct,
    blaschke_eval,
    blaschke_log_center,
    check_conditions,
    diskmap_from_json,
)
from .hullscan import (
    DegreeCapError,
    DiskFamilySpec,
    GridSlice,
    HullScanOptions,
    OptimizerOpts,
    classify_grid,
    disk_lower_bound,
    verify_theorem3,
)

EXIT_OK = 0
EXIT_CHECK_FAIL = 1
EXIT_USAGE = 2
EXIT_CAP = 3

_COORD_NAMES = {"z": 0, "w": 1}


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace("i", "j"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad complex literal {text!r}") from exc


def _coord_index(name: str) -> int:
    if name in _COORD_NAMES:
        return _COORD_NAMES[name]
    try:
        return int(name)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown coordinate {name!r}")


def _load_config(path: str | None, command: str) -> dict:
    if not path:
        return {}
    import tomli

    with open(path, "rb") as fh:
        data = tomli.load(fh)
    return data.get(command, {})


def _meta(args_dict: dict, seed: int | None = None) -> dict:
    return {
        "tool": "projhull",
        "version": __version__,
        "config": {k: v for k, v in sorted(args_dict.items()) if k not in ("func",)},
        "seed": seed,
        "threads": int(os.environ.get("PROJHULL_THREADS", 0)) or None,
    }


def _jsonable(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _require(args, *names) -> list[str]:
    return [n for n in names if getattr(args, n, None) is None]


def cmd_curve(args) -> int:
    params = PoleSeriesParams(args.variant)
    curve = build_curve(params, args.m)
    obj = curve_to_json(curve)
    obj["meta"].update(_meta({"variant": args.variant, "m": args.m}))
    write_json(args.output, obj)
    print(f"kappa = {fmt12(params.kappa)} (tail <= {fmt12(params.kappa_tail)})")
    print(f"tail_bound(N=8) = {fmt12(tail_bound(params, 8))}")
    if args.variant == "example2":
        print(f"sum k*c_k/eps_k = {fmt12(params.sum_k_c_over_eps())}")
    print(f"wrote {args.output} ({curve.m} samples)")
    return EXIT_OK


def cmd_scan(args) -> int:
    with open(args.curve) as fh:
        import json

        curve = curve_from_json(json.load(fh))
    fixed = {}
    for spec in args.fix or []:
        name, _, val = spec.partition("=")
        fixed[_coord_index(name)] = _parse_complex(val)
    rect = tuple(float(x) for x in args.rect.split(","))
    if len(rect) != 4:
        print("--rect needs re0,im0,re1,im1", file=sys.stderr)
        return EXIT_USAGE
    slice_spec = GridSlice(fixed, _coord_index(args.vary), rect, (args.res, args.res))
    opts = HullScanOptions(eigen_cutoff=args.eigen_cutoff)
    try:
        report = classify_grid(slice_spec, curve, args.dmax, opts)
    except DegreeCapError as exc:
        print(f"degree cap violated: {exc}", file=sys.stderr)
        return EXIT_CAP
    obj = report.to_json()
    obj["meta"] = _meta(
        {"curve": args.curve, "dmax": args.dmax, "res": args.res, "rect": args.rect,
         "vary": args.vary, "fix": args.fix}, seed=args.seed,
    )
    write_json(args.output, obj)
    with open(args.heatmap, "w") as fh:
        fh.write("re,im,lambda_max,slope,class\n")
        for re, im, lmax, slope, cls in report.heatmap_rows():
            fh.write(f"{fmt12(re)},{fmt12(im)},{fmt12(lmax)},{fmt12(slope)},{cls}\n")
    if args.pgm:
        _write_pgm(args.pgm, report, args.res)
    print(f"wrote {args.output} and {args.heatmap} ({len(report.profiles)} points)")
    return EXIT_OK


def _write_pgm(path: str, report, res: int) -> None:
    levels = {"IN": 255, "MARGINAL": 128, "OUT": 0}
    with open(path, "w") as fh:
        fh.write(f"P2\n{res} {res}\n255\n")
        for iy in range(res):
            row = report.profiles[iy * res : (iy + 1) * res]
            fh.write(" ".join(str(levels[p.classification]) for p in row) + "\n")


def cmd_thm3(args) -> int:
    params = PoleSeriesParams(args.variant)
    report = verify_theorem3(params, args.nmax, m=args.m)
    obj = report.to_json()
    obj["meta"] = _meta({"variant": args.variant, "nmax": args.nmax, "m": args.m})
    write_json(args.output, obj)
    if report.all_pass:
        print(f"all checks pass (N_max={args.nmax}, variant={args.variant})")
        return EXIT_OK
    print("FAILED checks: " + ", ".join(report.failing()), file=sys.stderr)
    return EXIT_CHECK_FAIL


def cmd_disk(args) -> int:
    import json

    with open(args.curve) as fh:
        curve = curve_from_json(json.load(fh))
    if args.disk_command == "check":
        with open(args.map) as fh:
            f = diskmap_from_json(json.load(fh))
        z0 = [_parse_complex(t) for t in args.z0.split(",")]
        report = check_conditions(f, curve, args.r, z0, args.M, m_bdy=args.m_bdy)
        obj = {
            "cond_i": {"holds": report.cond_i[0], "max_boundary_dist": report.cond_i[1]},
            "cond_ii": {"holds": report.cond_ii[0], "deviation": report.cond_ii[1]},
            "cond_iii": {
                "holds": report.cond_iii[0],
                "pole_log_sum": report.cond_iii[1],
                "M": report.cond_iii[2],
            },
            "cond_iv": {
                "holds": report.cond_iv[0],
                "offending_poles": _jsonable(report.cond_iv[1]),
            },
            "all_hold": report.all_hold,
            "meta": _meta(vars(args)),
        }
        write_json(args.output, obj)
        print(f"conditions {'pass' if report.all_hold else 'FAIL'}")
        return EXIT_OK if report.all_hold else EXIT_CHECK_FAIL

    # optimize
    z0 = [_parse_complex(t) for t in args.z0.split(",")]
    params = PoleSeriesParams("example1-standard")
    family = DiskFamilySpec.from_params(params, args.n)
    opts = OptimizerOpts(restarts=args.restarts, seed=args.seed)
    result = disk_lower_bound(z0, curve, args.r, family, opts)
    obj = {
        "value": result.value,
        "a": list(result.a),
        "c": list(result.c),
        "feasible": result.feasible,
        "boundary_dist": result.boundary_dist,
        "best_penalty": result.best_penalty,
        "meta": _meta(vars(args), seed=args.seed),
    }
    write_json(args.output, obj)
    if not result.feasible:
        print("infeasible: no candidate met the tube constraint", file=sys.stderr)
        return EXIT_CHECK_FAIL
    print(f"best pole log-sum = {fmt12(result.value)}")
    return EXIT_OK


def cmd_blaschke(args) -> int:
    if args.zeros_file:
        with open(args.zeros_file) as fh:
            texts = [t for t in fh.read().replace(",", " ").split() if t]
    else:
        texts = [t for t in (args.zeros or "").split(",") if t]
    try:
        zeros = [_parse_complex(t) for t in texts]
        B = BlaschkeProduct(tuple(zeros))
    except (argparse.ArgumentTypeError, ValueError) as exc:
        print(f"bad zeros: {exc}", file=sys.stderr)
        return EXIT_USAGE
    b0 = blaschke_eval(B, 0.0)
    print(f"B(0) = {fmt12(b0.real)}{'+' if b0.imag >= 0 else ''}{fmt12(b0.imag)}i")
    print(f"sum log|zeta_j| = {fmt12(blaschke_log_center(B))}")
    dev = 0.0
    for k in range(256):
        zeta = np.exp(2j * np.pi * k / 256)
        dev = max(dev, abs(abs(blaschke_eval(B, zeta)) - 1.0))
    print(f"max boundary |B|-1 deviation = {fmt12(dev)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="projhull", description=__doc__)
    p.add_argument("--config", help="TOML config file; flags win over config values")
    sub = p.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("curve", help="build a curve family and write its JSON file")
    pc.add_argument("--variant",
                    choices=["example1-standard", "example1-rapid", "example2"])
    pc.add_argument("--m", type=int, default=2048)
    pc.add_argument("-o", "--output", default="curve.json")
    pc.set_defaults(func=cmd_curve)

    ps = sub.add_parser("scan", help="classify a grid of points against a curve")
    ps.add_argument("--curve")
    ps.add_argument("--fix", action="append", metavar="COORD=VALUE")
    ps.add_argument("--vary")
    ps.add_argument("--rect", help="re0,im0,re1,im1")
    ps.add_argument("--res", type=int, default=64)
    ps.add_argument("--dmax", type=int, default=16)
    ps.add_argument("--eigen-cutoff", type=float, default=1e-12)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("-o", "--output", default="scan.json")
    ps.add_argument("--heatmap", default="scan.csv")
    ps.add_argument("--pgm", default=None)
    ps.set_defaults(func=cmd_scan)

    pt = sub.add_parser("thm3", help="run the counterexample inequality suite")
    pt.add_argument("--variant",
                    choices=["example1-standard", "example1-rapid"])
    pt.add_argument("--nmax", type=int, default=40)
    pt.add_argument("--m", type=int, default=2048)
    pt.add_argument("-o", "--output", default="thm3.json")
    pt.set_defaults(func=cmd_thm3)

    pd = sub.add_parser("disk", help="disk condition checks and pole optimization")
    dsub = pd.add_subparsers(dest="disk_command", required=True)
    dc = dsub.add_parser("check")
    dc.add_argument("--map")
    dc.add_argument("--curve")
    dc.add_argument("--r", type=float)
    dc.add_argument("--z0", help="comma-separated complex coordinates")
    dc.add_argument("--M", type=float)
    dc.add_argument("--m-bdy", type=int, default=1024)
    dc.add_argument("-o", "--output", default="disk_check.json")
    dc.set_defaults(func=cmd_disk)
    do = dsub.add_parser("optimize")
    do.add_argument("--curve")
    do.add_argument("--r", type=float)
    do.add_argument("--z0")
    do.add_argument("--n", type=int, default=3)
    do.add_argument("--restarts", type=int, default=5)
    do.add_argument("--seed", type=int, default=0)
    do.add_argument("-o", "--output", default="disk_opt.json")
    do.set_defaults(func=cmd_disk)

    pb = sub.add_parser("blaschke", help="Blaschke product diagnostics")
    pb.add_argument("--zeros", help="comma-separated complex zeros")
    pb.add_argument("--zeros-file")
    pb.set_defaults(func=cmd_blaschke)
    return p


def _required_for(args) -> list[str]:
    need = {
        "curve": ["variant"],
        "scan": ["curve", "vary", "rect"],
        "thm3": ["variant"],
        "blaschke": [],
    }
    if args.command == "disk":
        return ["map", "curve", "r", "z0", "M"] if args.disk_command == "check" else ["curve", "r", "z0"]
    return need[args.command]


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        given = set()
        for tok in argv:
            if tok.startswith("--"):
                given.add(tok[2:].split("=")[0].replace("-", "_"))
        for key, val in _load_config(args.config, args.command).items():
            key = key.replace("-", "_")
            if key not in given and hasattr(args, key):
                setattr(args, key, val)
    missing = _require(args, *_required_for(args))
    if missing:
        print("missing required option(s): " + ", ".join("--" + m for m in missing),
              file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except DegreeCapError as exc:
        print(f"degree cap violated: {exc}", file=sys.stderr)
        return EXIT_CAP
    except FileNotFoundError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
