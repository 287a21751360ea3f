#!/usr/bin/env python3
"""Multi-well cascade rate curves Gamma_T(omega) at cold and hot bath.

One CSV per temperature with the rate, the net rate, and the net rate
normalized by the free-dipole scale omega_d^2 N / gamma.
"""

import argparse
import sys
from pathlib import Path

from usc_relax.cli import main


def parse_args():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--x", type=float, default=1.0, help="coupling g/omega_c")
    p.add_argument("--gamma", type=float, default=0.1)
    p.add_argument("--temperatures", type=float, nargs="+", default=[0.0, 2.0])
    p.add_argument("--omega-max", type=float, default=4.0)
    p.add_argument("--points", type=int, default=1601)
    p.add_argument("--outdir", type=Path, default=Path("data"))
    return p.parse_args()


def run(args) -> int:
    args.outdir.mkdir(parents=True, exist_ok=True)
    for temp in args.temperatures:
        out = args.outdir / f"edm_rates_T{temp:g}.csv"
        code = main([
            "edm-rates",
            "--set", f"edm.g = {args.x}",
            "--set", f"edm.gamma = {args.gamma}",
            "--set", f"edm.temperature = {temp}",
            "--set", f"scan = omega, {-args.omega_max}, {args.omega_max}, {args.points}",
            "--output", str(out),
        ])
        if code != 0:
            return code
        print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(run(parse_args()))
