#!/usr/bin/env python3
"""Render the hot-spot figures for the named examples as SVG files."""

import argparse
import pathlib

from qghot.cli import main as qghot_main

CASES = [
    ("path", []),
    ("lasso", []),
    ("flower", ["--param", "petals=2,lengths=1:1.2"]),
    ("perturbed_figure8", ["--param", "eps=0.05"]),
    ("complete", ["--param", "V=4"]),
    ("krpamm_tree", ["--param", "eps=0.05,m=5"]),
]


def run(outdir: pathlib.Path) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    for example, params in CASES:
        out = outdir / f"{example}.svg"
        code = qghot_main(["plot", "--example", example, "--out", str(out)] + params)
        print(f"{example:20s} -> {out} ({'ok' if code == 0 else f'exit {code}'})")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="out/figures", type=pathlib.Path)
    run(ap.parse_args().outdir)
