#!/usr/bin/env python3
"""Plot eval score-gap curves from one or more training metrics CSVs."""

from __future__ import annotations

import argparse
import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def load(path: Path):
    ticks, gaps = [], []
    with open(path) as fh:
        for row in csv.DictReader(fh):
            ticks.append(int(row["ticks"]))
            gaps.append(float(row["eval_mean_gap"]))
    return ticks, gaps


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("csvs", nargs="+")
    ap.add_argument("--out", default="metrics.png")
    args = ap.parse_args()
    fig, ax = plt.subplots(figsize=(7, 4))
    for path in args.csvs:
        ticks, gaps = load(Path(path))
        ax.plot(ticks, gaps, marker="o", label=Path(path).stem)
    ax.axhline(0.0, color="gray", lw=0.8, ls="--")
    ax.set_xlabel("environment ticks")
    ax.set_ylabel("eval mean score gap")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=120)
    print(f"wrote {args.out}")
