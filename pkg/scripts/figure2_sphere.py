#!/usr/bin/env python3
"""Mexican hat on S^2: 4*pi*h_t(cos theta) for t in {1, 0.1, 0.05}."""
import argparse
from pathlib import Path

from mwave.cli import main as mwave


def run(out_dir: Path, samples: int):
    out_dir.mkdir(parents=True, exist_ok=True)
    for t in ("1", "0.1", "0.05"):
        path = out_dir / f"sphere_hat_t{t}.csv"
        status = mwave(["kernel", "--manifold", "sphere2", "--symbol", "mexican:1", "--t", t,
                        f"--theta=-pi:pi:{samples}", "-o", str(path)])
        print(f"t={t}: {path} (exit {status})")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results/figure2"))
    ap.add_argument("--samples", type=int, default=1025)
    args = ap.parse_args()
    run(args.out, args.samples)
