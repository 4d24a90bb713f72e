#!/usr/bin/env python3
"""Build the standard graph curve and scan a w-slice for hull membership.

Writes scan.json, scan.csv, and a class-label heatmap scan.pgm next to the
chosen output stem.  Equal configs give byte-identical outputs.
"""

import argparse
from dataclasses import dataclass

from projhull.cli import main as cli_main


@dataclass(frozen=True)
class ScanConfig:
    variant: str = "example1-standard"
    m: int = 2048
    d_max: int = 16
    res: int = 48
    fix_z: str = "0"
    rect: str = "-0.8,-0.8,1.2,0.8"
    out_stem: str = "scan"


def run(cfg: ScanConfig) -> int:
    curve_path = f"{cfg.out_stem}_curve.json"
    rc = cli_main(["curve", "--variant", cfg.variant, "--m", str(cfg.m),
                   "-o", curve_path])
    if rc != 0:
        return rc
    return cli_main([
        "scan", "--curve", curve_path, "--fix", f"z={cfg.fix_z}", "--vary", "w",
        f"--rect={cfg.rect}", "--res", str(cfg.res), "--dmax", str(cfg.d_max),
        "-o", f"{cfg.out_stem}.json", "--heatmap", f"{cfg.out_stem}.csv",
        "--pgm", f"{cfg.out_stem}.pgm",
    ])


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    defaults = ScanConfig()
    ap.add_argument("--variant", default=defaults.variant)
    ap.add_argument("--m", type=int, default=defaults.m)
    ap.add_argument("--d-max", type=int, default=defaults.d_max)
    ap.add_argument("--res", type=int, default=defaults.res)
    ap.add_argument("--fix-z", default=defaults.fix_z)
    ap.add_argument("--rect", default=defaults.rect)
    ap.add_argument("--out-stem", default=defaults.out_stem)
    args = ap.parse_args()
    raise SystemExit(run(ScanConfig(**vars(args))))
