"""Command-line experiment runner.

    hermframe exp1 [--out DIR]
    hermframe critical --N 160 --right 40

Exit codes: 0 success, 2 usage or invalid config, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import traceback

import numpy as np

from .experiments import EXPERIMENTS, ExperimentConfig, Runner, default_cache_dir, dumps, write_outputs

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3

_FLAG_TO_FIELD = {
    "N": "N",
    "lo": "lo",
    "hi": "hi",
    "eps": "eps",
    "panel_len": "panel_length",
    "nodes": "nodes_per_panel",
    "nullvec_index": "nullvec_index",
    "right": "right",
    "n_nonzero": "n_nonzero",
    "recipe": "recipe",
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hermframe", description="Truncated Hermite frame experiments")
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--config", help="JSON config file; command-line flags override it")
    p.add_argument("--N", type=int, help="basis size")
    p.add_argument("--lo", type=float, help="interval left end (critical: left end of the search range)")
    p.add_argument("--hi", type=float, help="interval right end (critical: right end of the search range)")
    p.add_argument("--eps", type=float, help="eigenvalue tolerance for the null space")
    p.add_argument("--panel-len", type=float, help="quadrature panel length")
    p.add_argument("--nodes", type=int, help="Gauss-Legendre nodes per panel")
    p.add_argument("--nullvec-index", type=int, help="which null vector to perturb along (0 = smallest eigenvalue)")
    p.add_argument("--right", type=float, help="fixed right endpoint for 'critical'")
    p.add_argument("--n-nonzero", type=int, help="nonzero coefficients in the exponential recipe")
    p.add_argument("--recipe", choices=("gaussian", "exponential"))
    p.add_argument("--out", metavar="DIR", help="write <experiment>.json and CSV plot data here")
    p.add_argument("--no-cache", action="store_true", help="do not read or write the Gram matrix cache")
    p.add_argument("--cache-dir", help="Gram cache directory (default $HERMFRAME_CACHE or ~/.cache/hermframe)")
    p.add_argument("--json", action="store_true", help="print the JSON result instead of the summary")
    return p


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    d: dict = {}
    if args.config:
        with open(args.config) as fh:
            d = json.load(fh)
        if not isinstance(d, dict):
            raise ValueError("config file must hold a JSON object")
    d["experiment"] = args.experiment
    for flag, name in _FLAG_TO_FIELD.items():
        v = getattr(args, flag)
        if v is not None:
            d[name] = v
    return ExperimentConfig.from_dict(d)


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.15g}"
    return str(v)


def summary_lines(res: dict) -> list[str]:
    rows: list[tuple[str, object]] = []
    cfg = res["config"]
    rows.append(("experiment", res["experiment"]))
    rows.append(("N", cfg["N"]))
    if "observables" in res:
        for tag, o in res["observables"].items():
            iv = "[{:g}, {:g}]".format(*o["interval"])
            rows += [(f"x_mean {iv}", o["x_mean"]), (f"x2_mean {iv}", o["x2_mean"]), (f"norm_sq {iv}", o["norm_sq"])]
    for k, v in res.get("tail_values", {}).items():
        rows.append((f"Psi({k})", v))
    if "null_dim" in res:
        rows += [("null_dim", res["null_dim"]), ("rank", res["rank"]), ("rank_profile", res["rank_profile"])]
    if "rank" in res and "null_dim" not in res:
        rows.append(("rank", res["rank"]))
    if "identity_deviation" in res:
        rows.append(("max |G - I|", res["identity_deviation"]))
    pr = res.get("perturbation")
    if pr:
        rows += [
            ("||c'' - c||", pr["coefficient_shift"]),
            ("||Psi'' - Psi||", pr["reconstruction_error"]),
            ("||Psi'' - Psi|| (quadrature)", pr["reconstruction_error_quadrature"]),
            ("energy c / c''", f"{pr['energy_truncated_base']:.15g} / {pr['energy_truncated_perturbed']:.15g}"),
            ("weight on n > n_nonzero", pr["weight_above_n_nonzero"]),
            ("<c, c'>", pr["cross_term"]),
            ("normalization roots D", pr["normalization_roots"]),
            ("distinct roots at 1e-9", pr["normalization_roots_resolved"]),
        ]
    if "null_dim_at_probes" in res:
        for a, prof in res["null_dim_at_probes"].items():
            rows.append((f"null dim [{a}, {res['right']:g}]", prof))
        rows.append(("critical left endpoint", res["critical_left"] if res["found"] else "not found"))
    w = max(len(k) for k, _ in rows)
    return [f"{k:<{w}}  {_fmt(v)}" for k, v in rows]


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = resolve_config(args)
    except (ValueError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"hermframe: invalid config: {exc}", file=sys.stderr)
        return EXIT_USAGE

    cache = None if args.no_cache else (args.cache_dir or default_cache_dir())
    t0 = time.perf_counter()
    try:
        with np.errstate(over="raise", invalid="raise"):
            res, plots = Runner(cache).run(cfg)
    except ValueError as exc:
        print(f"hermframe: invalid config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        tb = traceback.extract_tb(exc.__traceback__)
        where = tb[-1].filename.rsplit("/", 1)[-1] if tb else "?"
        print(f"hermframe: numerical failure in {where}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    elapsed = time.perf_counter() - t0

    if args.out:
        for p in write_outputs(res, plots, args.out):
            print(f"wrote {p}", file=sys.stderr)
    if args.json:
        sys.stdout.write(dumps(res))
    else:
        print("\n".join(summary_lines(res)))
        print(f"({elapsed:.1f} s)")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
