#!/usr/bin/env python3
"""Render the experiment CSVs as PNG figures.

Not part of the test surface; the CLI emits the CSVs and this script only
draws them. Usage:

    cargo run -p rainfade-cli -- experiment secrecy_vs_distance --out out/secrecy_vs_distance.csv
    python3 scripts/plot_figures.py out/*.csv

Writes one PNG next to each input CSV.
"""

import csv
import sys
from collections import defaultdict
from pathlib import Path

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit("matplotlib is required: pip install matplotlib")


def load(path):
    rows = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            rows.append(row)
    return rows


def plot(path):
    rows = load(path)
    if not rows:
        print(f"{path}: empty, skipped")
        return
    experiment = rows[0]["experiment"]

    series = defaultdict(list)
    for r in rows:
        key = (r["scenario"], r["ar"], r["metric"])
        series[key].append((float(r["x_value"]), float(r["value"])))

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for (scenario, ar, metric), pts in sorted(series.items()):
        if metric.endswith("_stderr"):
            continue
        pts.sort()
        label_bits = [b for b in (scenario, f"ar {ar}" if ar != "-" else "", metric) if b and b != "-"]
        xs, ys = zip(*pts)
        style = "--" if ar == "on" else "-"
        ax.plot(xs, ys, style, marker=".", label=" ".join(label_bits))

    ax.set_title(experiment.replace("_", " "))
    ax.set_xlabel("x")
    ax.set_ylabel(rows[0]["units"])
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=7)
    out = Path(path).with_suffix(".png")
    fig.tight_layout()
    fig.savefig(out, dpi=140)
    plt.close(fig)
    print(f"wrote {out}")


if __name__ == "__main__":
    if len(sys.argv) < 2:
        sys.exit(__doc__)
    for arg in sys.argv[1:]:
        plot(arg)
