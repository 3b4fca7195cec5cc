#!/usr/bin/env python3
"""Predicted vs measured reconstruction error as the target bound is tightened."""
import argparse
import math

import numpy as np

from mwave.spectral_core import mexican, reconstruction_grid
from mwave.transform import random_field, reconstruct, relative_l2_error


def sweep(targets, n_fields=20, seed=0):
    f = mexican(1)
    eta, L = 4 * math.pi**2, 400 * math.pi**2
    rng = np.random.default_rng(seed)
    fields = [random_field("torus2", 20, rng, lam_range=(eta, L)) for _ in range(n_fields)]
    for target in targets:
        grid, predicted = reconstruction_grid(f, eta, L, target)
        worst = max(relative_l2_error(reconstruct(F, f, grid, tail_tol=0.5), F) for F in fields)
        yield target, grid.t_min, grid.t_max, predicted, worst


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fields", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print("target,t_min,t_max,predicted,measured_max")
    for row in sweep([1e-2, 1e-3, 1e-4, 1e-5, 1e-6], args.fields, args.seed):
        print(",".join(format(v, ".6g") for v in row))
