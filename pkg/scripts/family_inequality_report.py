#!/usr/bin/env python3
"""Run the explicit polynomial-family inequality suite for both coefficient
rules and write one JSON report per variant."""

import argparse

from projhull._jsonio import write_json
from projhull.curves import PoleSeriesParams
from projhull.hullscan import verify_theorem3


def run(n_max: int, m: int, out_stem: str) -> int:
    worst_rc = 0
    for variant in ("example1-standard", "example1-rapid"):
        params = PoleSeriesParams(variant)
        report = verify_theorem3(params, n_max, m=m)
        path = f"{out_stem}_{variant}.json"
        write_json(path, report.to_json())
        status = "all pass" if report.all_pass else "FAIL: " + ", ".join(report.failing())
        print(f"{variant}: {status} -> {path}")
        if not report.all_pass:
            worst_rc = 1
    return worst_rc


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=60)
    ap.add_argument("--m", type=int, default=2048)
    ap.add_argument("--out-stem", default="family_report")
    args = ap.parse_args()
    raise SystemExit(run(args.n_max, args.m, args.out_stem))
