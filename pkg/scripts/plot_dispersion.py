#!/usr/bin/env python3
"""Sample plotting script: dispersion curves theta(k) from `ringchain dispersion`.

Usage:
    ringchain dispersion --set t=0.5 --set gamma=1 --set band_index=2 \
        --output disp.csv
    python3 scripts/plot_dispersion.py disp.csv disp.png
"""

import csv
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main(csv_path, out_path):
    branches = {}
    with open(csv_path, newline="") as fh:
        rows = csv.DictReader(line for line in fh if not line.startswith("#"))
        for row in rows:
            if row["branch"] == "NoSolution":
                continue
            branches.setdefault(row["branch"], []).append(
                (float(row["k"]), float(row["theta"])))
    fig, ax = plt.subplots()
    for br, pts in sorted(branches.items()):
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], ".", ms=2,
                label=f"branch {br}")
    ax.set_xlabel("k")
    ax.set_ylabel(r"$\theta$")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    print(f"wrote {out_path}")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2] if len(sys.argv) > 2 else "dispersion.png")
