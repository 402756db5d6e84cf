"""Run both truncation experiments and write JSON + CSV plot data.

    python scripts/reproduce_experiments.py --out results/
"""

import argparse
import sys

from hermframe.experiments import ExperimentConfig, Runner, default_cache_dir, write_outputs
from hermframe.cli import summary_lines


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results")
    ap.add_argument("--no-cache", action="store_true")
    args = ap.parse_args()
    runner = Runner(None if args.no_cache else default_cache_dir())
    for exp in ("exp1", "exp2"):
        res, plots = runner.run(ExperimentConfig(exp))
        for p in write_outputs(res, plots, args.out):
            print(f"wrote {p}", file=sys.stderr)
        print("\n".join(summary_lines(res)))
        print()


if __name__ == "__main__":
    main()
