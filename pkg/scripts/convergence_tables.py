#!/usr/bin/env python3
"""Emit the shrinking-edge convergence tables for the four limit families.

One CSV per family with the frozen header (delta, eig_err, supnorm_err),
plus a printed summary.  The delta ladder defaults to 1e-1, 1e-2, 1e-3.
"""

import argparse
import pathlib

from qghot.catalog import limit_compare, placement_limit_families
from qghot.reports import write_csv


def run(outdir: pathlib.Path, deltas):
    outdir.mkdir(parents=True, exist_ok=True)
    for mode, fam in placement_limit_families().items():
        rows = limit_compare(fam, deltas, index=2)
        path = outdir / f"limit_{mode}_{fam.name}.csv"
        write_csv(path, ["delta", "eig_err", "supnorm_err"], [list(r) for r in rows])
        print(f"family {mode:3s} ({fam.name}):")
        for delta, eig_err, sup_err in rows:
            print(f"  delta={delta:<8g} eig_err={eig_err:.6e} supnorm_err={sup_err:.6e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="out/limits", type=pathlib.Path)
    ap.add_argument("--deltas", default="0.1,0.01,0.001")
    args = ap.parse_args()
    run(args.outdir, [float(x) for x in args.deltas.split(",")])
