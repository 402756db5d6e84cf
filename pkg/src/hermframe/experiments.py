"""Experiment drivers shared by the CLI and ``scripts/``.

Every runner takes an :class:`ExperimentConfig` and returns a JSON-ready dict
plus optional CSV plot series.  Nothing time- or host-dependent goes into the
result, so identical configs serialize to identical bytes.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .frame import (
    DEFAULT_EPS,
    GramCache,
    build_gram,
    eigendecompose,
    null_space,
    rank_profile,
    residual_norm_sq,
)
from .quadrature import Interval, build_rule
from .wavepacket import (
    Wavepacket,
    critical_interval_search,
    energy_truncated,
    gen_coeffs_exponential,
    gen_coeffs_gaussian,
    observables,
    perturb,
    solve_normalization,
    synthesize,
)

EXPERIMENTS = ("exp1", "exp2", "gram", "nullspace", "critical", "observables")
EPS_PROFILE = (1e-10, 1e-12, 1e-14)
WIDE = Interval(-40.0, 40.0)
PLOT_POINTS = 2000

_DEFAULTS = {
    "exp1": {"N": 160, "lo": -1.0, "hi": 30.0},
    "exp2": {"N": 130, "lo": -7.0, "hi": 10.0},
    "gram": {"N": 160, "lo": -1.0, "hi": 30.0},
    "nullspace": {"N": 160, "lo": -1.0, "hi": 30.0},
    "critical": {"N": 160, "lo": -40.0, "hi": -1.0},
    "observables": {"N": 160, "lo": -1.0, "hi": 30.0},
}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    N: int | None = None
    lo: float | None = None
    hi: float | None = None
    eps: float = DEFAULT_EPS
    panel_length: float = 1.0
    nodes_per_panel: int = 40
    nullvec_index: int = 0
    right: float = 40.0
    n_nonzero: int = 20
    recipe: str | None = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        d = _DEFAULTS[self.experiment]
        for k in ("N", "lo", "hi"):
            if getattr(self, k) is None:
                object.__setattr__(self, k, d[k])
        if self.recipe is None:
            object.__setattr__(self, "recipe", "exponential" if self.experiment == "exp2" else "gaussian")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if self.nodes_per_panel < 2:
            raise ValueError(f"nodes_per_panel must be >= 2, got {self.nodes_per_panel}")
        if not self.panel_length > 0:
            raise ValueError(f"panel_length must be positive, got {self.panel_length}")
        if self.nullvec_index < 0:
            raise ValueError(f"nullvec_index must be >= 0, got {self.nullvec_index}")
        if self.recipe not in ("gaussian", "exponential"):
            raise ValueError(f"recipe must be 'gaussian' or 'exponential', got {self.recipe!r}")
        if self.recipe == "exponential" and self.n_nonzero > self.N:
            raise ValueError(f"n_nonzero={self.n_nonzero} exceeds N={self.N}")
        Interval(self.lo, self.hi)
        if self.experiment == "critical" and not self.hi < self.right:
            raise ValueError(f"left range [{self.lo}, {self.hi}] must lie left of right={self.right}")

    @property
    def interval(self) -> Interval:
        return Interval(self.lo, self.hi)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)


class Runner:
    """Holds the Gram cache for one invocation."""

    def __init__(self, cache_dir: str | Path | None = None):
        self.cache = GramCache(cache_dir) if cache_dir is not None else None

    def gram(self, N, rule):
        if self.cache is not None:
            return self.cache.get_or_build(N, rule)
        return build_gram(N, rule.interval, rule)

    def rule(self, cfg: ExperimentConfig, interval: Interval):
        return build_rule(interval, cfg.nodes_per_panel, min(cfg.panel_length, interval.length))

    def run(self, cfg: ExperimentConfig) -> tuple[dict, dict]:
        """Returns ``(result, plots)``; ``plots`` maps a CSV stem to (header, rows)."""
        fn = getattr(self, "_run_" + cfg.experiment)
        result, plots = fn(cfg)
        result = {"experiment": cfg.experiment, "config": cfg.to_dict(), **result}
        return _jsonable(result), plots

    # --- building blocks -------------------------------------------------

    def _coeffs(self, cfg):
        if cfg.recipe == "gaussian":
            return gen_coeffs_gaussian(cfg.N)
        return gen_coeffs_exponential(cfg.n_nonzero, cfg.N)

    def _spectrum(self, cfg, interval=None):
        interval = interval or cfg.interval
        rule = self.rule(cfg, interval)
        G = self.gram(cfg.N, rule)
        dec = eigendecompose(G)
        return rule, G, dec

    def _nonuniqueness(self, cfg, c):
        rule, G, dec = self._spectrum(cfg)
        ns = null_space(dec, cfg.eps)
        out = {
            "null_dim": ns.dim,
            "rank": ns.rank,
            "rank_profile": rank_profile(dec, EPS_PROFILE),
            "null_dim_profile": {k: cfg.N - v for k, v in rank_profile(dec, EPS_PROFILE).items()},
            "eigenvalues_smallest": dec.eigenvalues[: min(10, cfg.N)].tolist(),
            "eigenvalue_max": float(dec.eigenvalues[-1]),
        }
        plots = {}
        wp = Wavepacket(c)
        if ns.dim == 0:
            out["perturbation"] = None
            return out, plots
        if cfg.nullvec_index >= ns.dim:
            raise ValueError(f"nullvec_index {cfg.nullvec_index} out of range; null space has dimension {ns.dim}")
        v = ns.vector(cfg.nullvec_index)
        pr = perturb(c, v, 1.0, G)
        quad_err_sq = residual_norm_sq(pr.delta, rule)
        wp2 = Wavepacket(pr.combined)
        obs1 = observables(wp, cfg.interval, rule)
        obs2 = observables(wp2, cfg.interval, rule)
        e1 = energy_truncated(c, G)
        e2 = energy_truncated(pr.combined, G)
        sol = solve_normalization(c, v)
        crosses = [float(np.dot(c, ns.basis[:, i])) for i in range(ns.dim)]
        all_unique = all(
            solve_normalization(c, ns.basis[:, i]).unique_zero
            for i in range(ns.dim)
            if abs(crosses[i]) <= 1e-10
        )
        cn2 = pr.combined**2
        out["perturbation"] = {
            "nullvec_index": cfg.nullvec_index,
            "eigenvalue": float(ns.eigenvalues[cfg.nullvec_index]),
            "coefficient_shift": pr.coefficient_shift,
            "reconstruction_error": pr.reconstruction_error,
            "reconstruction_error_quadrature": math.sqrt(quad_err_sq),
            "residual_identity_rel": abs(quad_err_sq - pr.reconstruction_error**2) / max(quad_err_sq, 1e-300),
            "observables_base": obs1.as_dict(),
            "observables_perturbed": obs2.as_dict(),
            "energy_truncated_base": e1,
            "energy_truncated_perturbed": e2,
            "energy_difference": abs(e2 - e1),
            "energy_tolerance": 10 * (cfg.N - 0.5) * pr.reconstruction_error,
            "weight_above_n_nonzero": float(cn2[cfg.n_nonzero :].sum() / cn2.sum()),
            "cross_term": sol.cross_term,
            "normalization_roots": list(sol.roots),
            "normalization_roots_resolved": list(sol.resolved_roots),
            "normalization_unique_zero": sol.unique_zero,
            "cross_terms_max_abs": max(abs(t) for t in crosses),
            "normalization_unique_zero_all": all_unique,
        }
        x = np.linspace(cfg.lo, cfg.hi, PLOT_POINTS)
        plots["function"] = (
            ["x", "psi", "psi_dd"],
            np.column_stack([x, synthesize(wp, x), synthesize(wp2, x)]),
        )
        plots["coefficients"] = (
            ["n", "c", "c_dd"],
            np.column_stack([np.arange(1, cfg.N + 1), c, pr.combined]),
        )
        return out, plots

    # --- experiments -----------------------------------------------------

    def _run_exp1(self, cfg):
        c = self._coeffs(cfg)
        wp = Wavepacket(c)
        res = {
            "observables": self._observables_pair(cfg, wp),
            "tail_values": {repr(cfg.lo): float(synthesize(wp, [cfg.lo])[0]), repr(cfg.hi): float(synthesize(wp, [cfg.hi])[0])},
            "coefficient_norm": math.sqrt(math.fsum(c * c)),
        }
        nu, plots = self._nonuniqueness(cfg, c)
        res.update(nu)
        return res, plots

    _run_exp2 = _run_exp1

    def _observables_pair(self, cfg, wp):
        return {
            "interval": observables(wp, cfg.interval, self.rule(cfg, cfg.interval)).as_dict(),
            "reference": observables(wp, WIDE, self.rule(cfg, WIDE)).as_dict(),
        }

    def _run_observables(self, cfg):
        wp = Wavepacket(self._coeffs(cfg))
        return {"observables": self._observables_pair(cfg, wp)}, {}

    def _run_gram(self, cfg):
        rule, G, dec = self._spectrum(cfg)
        return {
            "gram": G.entries.ravel().tolist(),
            "eigenvalues": dec.eigenvalues.tolist(),
            "rank": int(np.count_nonzero(dec.eigenvalues > cfg.eps)),
            "rank_profile": rank_profile(dec, EPS_PROFILE),
            "identity_deviation": float(np.max(np.abs(G.entries - np.eye(cfg.N)))),
            "diag_min": float(np.min(np.diag(G.entries))),
            "diag_max": float(np.max(np.diag(G.entries))),
        }, {}

    def _run_nullspace(self, cfg):
        rule, G, dec = self._spectrum(cfg)
        ns = null_space(dec, cfg.eps)
        res = {
            "null_dim": ns.dim,
            "rank": ns.rank,
            "rank_profile": rank_profile(dec, EPS_PROFILE),
            "eigenvalues": ns.eigenvalues.tolist(),
            "residuals": [math.sqrt(max(G.quadratic_form(ns.basis[:, i]), 0.0)) for i in range(ns.dim)],
            "basis": ns.basis.T.tolist(),
        }
        return res, {}

    def _run_critical(self, cfg):
        probes = {}
        for a in (-1.0, -10.0, -15.0):
            iv = Interval(a, cfg.right)
            rule = self.rule(cfg, iv)
            dec = eigendecompose(self.gram(cfg.N, rule))
            probes[repr(a)] = {f"{e:g}": int(np.count_nonzero(dec.eigenvalues <= e)) for e in EPS_PROFILE}
        search = critical_interval_search(
            cfg.N,
            cfg.eps,
            cfg.interval,
            cfg.right,
            nodes_per_panel=cfg.nodes_per_panel,
            panel_length=cfg.panel_length,
            gram_source=self.gram,
        )
        return {
            "right": cfg.right,
            "null_dim_at_probes": probes,
            "found": search.found,
            "critical_left": search.endpoint,
            "bisection": search.probes,
        }, {}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj


def dumps(result: dict) -> str:
    return json.dumps(result, indent=2, sort_keys=True) + "\n"


def write_outputs(result: dict, plots: dict, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = result["experiment"]
    paths = [out / f"{stem}.json"]
    paths[0].write_text(dumps(result))
    for name, (header, rows) in plots.items():
        p = out / f"{stem}_{name}.csv"
        with p.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([repr(float(v)) if i else _first(v, header[0]) for i, v in enumerate(row)])
        paths.append(p)
    return paths


def _first(v, name):
    return str(int(v)) if name == "n" else repr(float(v))


def default_cache_dir() -> Path:
    env = os.environ.get("HERMFRAME_CACHE")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "hermframe"
