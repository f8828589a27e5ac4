#!/usr/bin/env python3
"""Run the reproduction harness over the whole example catalog.

Writes one report per example into --outdir and prints a one-line summary
per example.  Exits nonzero if any fact table contains a FAIL.
"""

import argparse
import pathlib
import sys

from qghot.cli import main as qghot_main

CASES = [
    ("path", []),
    ("cycle", []),
    ("pumpkin", ["--param", "E=3"]),
    ("star", ["--param", "E=4"]),
    ("flower", ["--param", "petals=2,lengths=1:1.2"]),
    ("complete", ["--param", "V=4"]),
    ("lasso", []),
    ("figure8", []),
    ("perturbed_figure8", ["--param", "eps=0.05"]),
    ("loop_dumbbell", ["--param", "loop=0.1"]),
    ("krpamm_tree", ["--param", "eps=0.05,m=20"]),
    ("n_star_long_short", ["--param", "n=5,eps=0.1"]),
    ("pumpkin_on_stick", []),
    ("pumpkin_necklace", []),
    ("fig_m3", []),
]


def run(outdir: pathlib.Path) -> int:
    outdir.mkdir(parents=True, exist_ok=True)
    worst = 0
    for example, params in CASES:
        out = outdir / f"reproduce_{example}.txt"
        code = qghot_main(
            ["reproduce", "--example", example, "--out", str(out)] + params
        )
        status = "ok" if code == 0 else f"exit {code}"
        print(f"{example:20s} {status}")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="out/reproductions", type=pathlib.Path)
    args = ap.parse_args()
    sys.exit(run(args.outdir))
