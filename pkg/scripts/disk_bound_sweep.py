#!/usr/bin/env python3
"""Sweep the disk-functional lower bound at the origin over tube radii.

For each radius r the optimizer searches pole families of size n for the
best feasible pole log-sum; larger radii admit deeper poles and a larger
(less negative) bound.  The analytic pole log-sum of the n-term reference
family is printed for comparison.
"""

import argparse
import math

from projhull.curves import PoleSeriesParams, build_curve
from projhull.hullscan import DiskFamilySpec, OptimizerOpts, disk_lower_bound


def run(n: int, m: int, radii: list[float], seed: int) -> int:
    params = PoleSeriesParams("example1-standard")
    curve = build_curve(params, m)
    family = DiskFamilySpec.from_params(params, n)
    reference = sum(math.log(params.a(j)) for j in range(1, n + 1))
    print(f"reference pole log-sum (n={n} family): {reference:.10f}")
    print("r, feasible, value, boundary_dist")
    for r in radii:
        res = disk_lower_bound(
            [0.0, 0.0], curve, r, family, OptimizerOpts(restarts=3, seed=seed)
        )
        val = f"{res.value:.10f}" if res.feasible else "-inf"
        print(f"{r:.4f}, {res.feasible}, {val}, {res.boundary_dist:.6f}")
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--m", type=int, default=1024)
    ap.add_argument("--radii", type=float, nargs="+", default=[0.02, 0.05, 0.1, 0.2])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    raise SystemExit(run(args.n, args.m, args.radii, args.seed))
