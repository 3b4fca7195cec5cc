#!/usr/bin/env python3
"""Closed-form small-t approximations on S^2 against the zonal series, over a range of t.

Prints the max abs error of g_t and of both h_t brackets per scale and
writes the table as CSV.
"""
import argparse
import csv
import math
from pathlib import Path

import numpy as np

from mwave.sphere import gt_approx, heat_kernel_series, ht_approx, mexican_series


def error_table(ts, samples=2048, L=2000):
    theta = np.linspace(-math.pi, math.pi, samples)
    x = np.cos(theta)
    rows = []
    for t in ts:
        g = 4 * math.pi * heat_kernel_series(t, x, L)
        h = 4 * math.pi * mexican_series(t, x, L)
        rows.append((
            t,
            float(np.abs(gt_approx(t, theta) - g).max()),
            float(np.abs(ht_approx(t, theta) - h).max()),
            float(np.abs(ht_approx(t, theta, "direct") - h).max()),
        ))
    return rows


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results/approximation_errors.csv"))
    ap.add_argument("--t", default="0.05,0.075,0.1,0.15,0.2,0.3")
    args = ap.parse_args()
    ts = [float(v) for v in args.t.split(",")]
    rows = error_table(ts)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "gt_err", "ht_err", "ht_direct_err"])
        w.writerows(rows)
    for r in rows:
        print("t={:<6g} g {:.2e}  h {:.2e}  h(direct) {:.2e}".format(*r))
