"""Plot the CSV written by ``gclab scaling``.

    gclab scaling --ns 64,128,256 --p 0.5 --samples 20 --out scaling.csv
    python scripts/plot_scaling.py scaling.csv scaling.png

Needs matplotlib (``pip install -e .[plot]``).
"""

import argparse
import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("csv")
    ap.add_argument("png")
    args = ap.parse_args()
    with open(args.csv) as fh:
        rows = list(csv.DictReader(fh))
    n = [int(r["n"]) for r in rows]
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
    for ax, key, label in zip(axes, ("ratio", "charge"), ("α*/(n ln n)", "(√n+√α*)/√(n ln n)")):
        mid = [float(r[f"{key}_q50"]) for r in rows]
        lo = [float(r[f"{key}_q0"]) for r in rows]
        hi = [float(r[f"{key}_q100"]) for r in rows]
        ax.plot(n, mid, "o-")
        ax.fill_between(n, lo, hi, alpha=0.25)
        ax.set_xscale("log", base=2)
        ax.set_xlabel("n")
        ax.set_ylabel(label)
    fig.tight_layout()
    fig.savefig(args.png, dpi=120)


if __name__ == "__main__":
    main()
