"""Null-space dimension of G(N, [a, right]) over a grid of left endpoints and tolerances.

Prints a CSV table to stdout; useful for seeing how the "empty null space"
boundary moves with eps.

    python scripts/eps_scan.py --N 160 --right 40 --start -20 --stop -1 --step 1
"""

import argparse
import csv
import sys

import numpy as np

from hermframe import Interval, build_rule, eigendecompose
from hermframe.experiments import Runner, default_cache_dir

EPS = (1e-8, 1e-10, 1e-12, 1e-14)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--N", type=int, default=160)
    ap.add_argument("--right", type=float, default=40.0)
    ap.add_argument("--start", type=float, default=-20.0)
    ap.add_argument("--stop", type=float, default=-1.0)
    ap.add_argument("--step", type=float, default=1.0)
    ap.add_argument("--no-cache", action="store_true")
    args = ap.parse_args()
    runner = Runner(None if args.no_cache else default_cache_dir())
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["left"] + [f"null_dim_eps_{e:g}" for e in EPS] + ["min_eigenvalue"])
    for a in np.arange(args.start, args.stop + 0.5 * args.step, args.step):
        iv = Interval(float(a), args.right)
        lam = eigendecompose(runner.gram(args.N, build_rule(iv))).eigenvalues
        w.writerow([f"{a:g}"] + [int(np.count_nonzero(lam <= e)) for e in EPS] + [repr(float(lam[0]))])


if __name__ == "__main__":
    main()
