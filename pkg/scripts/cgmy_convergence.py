#!/usr/bin/env python3
"""Convergence of beta-family scale function bounds to the CGMY limit.

For a decreasing sequence of beta values with the tempered-stable
reparameterization (c = c~ * beta^lambda, alpha = alpha~ / beta), computes
the truncated scale-function bounds on a grid and the sup-norm differences
between successive curves, writing the curves and a convergence summary.
"""
import argparse
import csv
import pathlib

import numpy as np

from phscale.meromorphic import BETA_BENCHMARK, BETA_BENCHMARK_Q, cgmy_limit_study


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--betas", type=float, nargs="+", default=[1.0, 0.5, 0.1])
    ap.add_argument("--tilde-alpha", type=float, default=3.0)
    ap.add_argument("--tilde-c", type=float, default=0.1)
    ap.add_argument("--m", type=int, default=100)
    ap.add_argument("--q", type=float, default=BETA_BENCHMARK_Q)
    ap.add_argument("--x-max", type=float, default=1.0)
    ap.add_argument("--points", type=int, default=201)
    args = ap.parse_args()

    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    grid = np.linspace(0.0, args.x_max, args.points)
    study = cgmy_limit_study(
        BETA_BENCHMARK, args.tilde_alpha, args.tilde_c, args.betas, args.q,
        args.m, grid,
    )
    dest = out_dir / "cgmy_convergence_curves.csv"
    with dest.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["beta", "x", "lower", "upper"])
        for beta in args.betas:
            c = study["curves"][beta]
            for x, lo, hi in zip(grid, c["lower"], c["upper"]):
                w.writerow([beta, f"{float(x):.6f}", f"{lo:.10g}", f"{hi:.10g}"])
    print(f"wrote {dest}")

    dest = out_dir / "cgmy_convergence_summary.csv"
    with dest.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["beta_from", "beta_to", "upper_sup_diff", "lower_sup_diff"])
        for d in study["sup_diffs"]:
            w.writerow(
                [d["beta_pair"][0], d["beta_pair"][1],
                 f"{d['upper_sup_diff']:.6g}", f"{d['lower_sup_diff']:.6g}"]
            )
            print(
                f"beta {d['beta_pair'][0]} -> {d['beta_pair'][1]}: "
                f"sup|upper diff| = {d['upper_sup_diff']:.4g}"
            )
    print(f"wrote {dest}")


if __name__ == "__main__":
    main()
