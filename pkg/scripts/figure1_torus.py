#!/usr/bin/env python3
"""Mexican hat on T^2: pi*h_t and t^2*pi*h_t over the centred unit cell for t in {2, 1/2, 1/8}."""
import argparse
from pathlib import Path

from mwave.cli import main as mwave


def run(out_dir: Path, grid: int):
    out_dir.mkdir(parents=True, exist_ok=True)
    for t in ("2", "0.5", "0.125"):
        path = out_dir / f"torus_hat_t{t}.csv"
        status = mwave(["kernel", "--manifold", "torus2", "--symbol", "paper-torus", "--t", t,
                        "--grid", str(grid), "-o", str(path)])
        print(f"t={t}: {path} (exit {status})")
    path = out_dir / "torus_diagonal.csv"
    mwave(["validate", "--target", "torus-diagonal", "--t", "2,1,0.5,0.125,0.0625", "-o", str(path)])


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results/figure1"))
    ap.add_argument("--grid", type=int, default=101)
    args = ap.parse_args()
    run(args.out, args.grid)
