#!/usr/bin/env python3
"""Sample plotting script: band/gap chart from `ringchain bands` CSV output.

Usage:
    ringchain bands --config configs/bandchart_kirchhoff.cfg --output bands.csv
    python3 scripts/plot_bands.py bands.csv bands.png

Positive bands are drawn as vertical k-segments per t; negative bands (rows
with energy_sign = Negative, coordinates in kappa) are drawn below zero at
-kappa for a compact chart.
"""

import csv
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main(csv_path, out_path):
    pos, neg = [], []
    with open(csv_path, newline="") as fh:
        rows = csv.DictReader(line for line in fh if not line.startswith("#"))
        for row in rows:
            if row["kind"] != "Band":
                continue
            seg = (float(row["t"]), float(row["k_lo"]), float(row["k_hi"]))
            (neg if row["energy_sign"] == "Negative" else pos).append(seg)
    fig, ax = plt.subplots(figsize=(6, 7))
    for t, lo, hi in pos:
        ax.plot([t, t], [lo, hi], color="tab:blue", lw=2, solid_capstyle="butt")
    for t, lo, hi in neg:
        ax.plot([t, t], [-hi, -lo], color="tab:red", lw=2, solid_capstyle="butt")
    ax.axhline(0.0, color="k", lw=0.5)
    ax.set_xlabel("t")
    ax.set_ylabel("k  (negative part drawn at $-\\kappa$)")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    print(f"wrote {out_path}")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2] if len(sys.argv) > 2 else "bands.png")
