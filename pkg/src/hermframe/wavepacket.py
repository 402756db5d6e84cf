"""Oscillator wavepackets, their observables and null-space perturbations."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .frame import (
    DEFAULT_EPS,
    GramMatrix,
    build_gram,
    eigendecompose,
    null_space,
)
from .hermite import energy_levels, eval_basis
from .quadrature import Interval, QuadratureRule, build_rule, integrate


def gen_coeffs_gaussian(N: int = 160, center: float = 80, a: float = 0.0032, b: float = 0.0064) -> np.ndarray:
    """``c_n = exp(-a (n-center)^2) / sqrt(sum_m exp(-b (m-center)^2))``.

    The vector has unit norm only when ``b == 2a``; other choices are
    allowed but raise a ``UserWarning``.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    n = np.arange(1, N + 1)
    norm = math.sqrt(math.fsum(np.exp(-b * (n - center) ** 2)))
    if not math.isclose(b, 2 * a, rel_tol=1e-15):
        warnings.warn(f"b={b} != 2a={2 * a}: coefficient vector will not have unit norm", stacklevel=2)
    return np.exp(-a * (n - center) ** 2) / norm


def gen_coeffs_exponential(N_nonzero: int = 20, N_total: int = 20) -> np.ndarray:
    """``c_n = exp(-n) / sqrt(sum_{m<=N_nonzero} exp(-2m))`` padded with zeros to ``N_total``."""
    if N_nonzero < 1:
        raise ValueError(f"N_nonzero must be >= 1, got {N_nonzero}")
    if N_nonzero > N_total:
        raise ValueError(f"N_nonzero={N_nonzero} exceeds N_total={N_total}")
    n = np.arange(1, N_nonzero + 1)
    c = np.zeros(N_total)
    c[:N_nonzero] = np.exp(-n) / math.sqrt(math.fsum(np.exp(-2.0 * n)))
    return c


@dataclass(frozen=True)
class Wavepacket:
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=float)
        if c.ndim != 1 or c.size < 1:
            raise ValueError("coefficients must be a non-empty 1-D vector")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coefficients", c)

    @property
    def size(self) -> int:
        return self.coefficients.size

    def __call__(self, x) -> np.ndarray:
        return synthesize(self, x)


def synthesize(wp: Wavepacket, x_grid) -> np.ndarray:
    """``Psi(x) = sum_n c_n psi_n(x)`` on the whole line (no truncation)."""
    return eval_basis(np.asarray(x_grid, dtype=float), wp.size) @ wp.coefficients


@dataclass(frozen=True)
class ObservableReport:
    interval: Interval
    norm_sq: float
    x_mean: float
    x2_mean: float
    energy_mean: float

    def as_dict(self) -> dict:
        return {
            "interval": [self.interval.lo, self.interval.hi],
            "norm_sq": self.norm_sq,
            "x_mean": self.x_mean,
            "x2_mean": self.x2_mean,
            "energy_mean": self.energy_mean,
        }


def observables(wp: Wavepacket, interval: Interval, rule: QuadratureRule | None = None) -> ObservableReport:
    """Norm, <x>, <x^2> by quadrature of ``|Psi|^2`` over ``interval``.

    The energy is the whole-line value ``sum |c_n|^2 (n - 1/2)``; see
    :func:`energy_truncated` for the interval-restricted one.
    """
    if rule is None:
        rule = build_rule(interval)
    if rule.interval != interval:
        raise ValueError(f"quadrature rule is on {rule.interval}, observables requested on {interval}")
    x = rule.nodes
    dens = synthesize(wp, x) ** 2
    c2 = wp.coefficients**2
    return ObservableReport(
        interval,
        integrate(rule, dens),
        integrate(rule, dens * x),
        integrate(rule, dens * x * x),
        math.fsum(c2 * energy_levels(wp.size)),
    )


def energy_truncated(c, G: GramMatrix) -> float:
    """``sum_{m,n} c_m g_{mn} E_n c_n`` using ``H psi_n = E_n psi_n`` inside the interval."""
    c = np.asarray(c, dtype=float)
    if c.shape != (G.size,):
        raise ValueError(f"coefficient length {c.size} does not match Gram size {G.size}")
    return math.fsum(c * (G.entries @ (energy_levels(G.size) * c)))


@dataclass(frozen=True)
class PerturbationResult:
    base: np.ndarray
    direction: np.ndarray
    scale: float
    combined: np.ndarray
    reconstruction_error: float
    coefficient_shift: float

    @property
    def delta(self) -> np.ndarray:
        return self.scale * self.direction


def perturb(c, nullvec, D: float, G: GramMatrix) -> PerturbationResult:
    """Move ``c`` along a null direction: ``c'' = c + D * nullvec``.

    ``reconstruction_error`` is ``||Psi'' - Psi||`` on the interval, i.e.
    ``sqrt((D v)^T G (D v))``, with the quadratic form taken in double-double.
    """
    c = np.asarray(c, dtype=float)
    v = np.asarray(nullvec, dtype=float)
    if c.shape != v.shape or c.shape != (G.size,):
        raise ValueError(f"size mismatch: c={c.size}, nullvec={v.size}, Gram={G.size}")
    nv = math.sqrt(math.fsum(v * v))
    if abs(nv - 1.0) > 1e-12:
        raise ValueError(f"null vector must have unit norm, got {nv}")
    d = D * v
    err = math.sqrt(max(G.quadratic_form(d), 0.0))
    return PerturbationResult(c, v, D, c + d, err, abs(D) * nv)


@dataclass(frozen=True)
class NormalizationSolution:
    roots: tuple[float, ...]
    cross_term: float
    base_norm_sq: float
    resolution: float = 1e-9

    @property
    def resolved_roots(self) -> tuple[float, ...]:
        """Roots with any pair closer than ``resolution`` merged.

        A cross term at rounding level puts the second root ``-2t`` within
        a few ulps of the first; such a pair is one root at this precision,
        represented by its member nearest zero.
        """
        out: list[float] = []
        for r in sorted(self.roots):
            if out and abs(r - out[-1]) < self.resolution:
                if abs(r) < abs(out[-1]):
                    out[-1] = r
            else:
                out.append(r)
        return tuple(out)

    @property
    def unique_zero(self) -> bool:
        small = [r for r in self.resolved_roots if abs(r) <= self.resolution]
        return len(small) == 1


def solve_normalization(c, nullvec, norm_tol: float = 1e-14) -> NormalizationSolution:
    """Real ``D`` with ``||c + D v||^2 = 1`` for a unit vector ``v``.

    Solves ``D^2 + 2 t D + (||c||^2 - 1) = 0`` with ``t = <c, v>`` measured,
    not assumed zero.  ``||c||^2 - 1`` within ``norm_tol`` of zero is taken
    as exactly zero, since a stored unit vector is only unit to rounding.
    An empty root set is a valid outcome.
    """
    c = np.asarray(c, dtype=float)
    v = np.asarray(nullvec, dtype=float)
    if c.shape != v.shape:
        raise ValueError(f"size mismatch: c={c.size}, nullvec={v.size}")
    nv = math.fsum(v * v)
    if abs(nv - 1.0) > 1e-12:
        raise ValueError(f"null vector must have unit norm, got {math.sqrt(nv)}")
    t = math.fsum(c * v)
    cn = math.fsum(c * c)
    q = cn - 1.0
    if abs(q) <= norm_tol:
        q = 0.0
    disc = t * t - q
    if disc < 0:
        roots: tuple[float, ...] = ()
    elif disc == 0:
        roots = (0.0 - t,)
    else:
        # larger-magnitude root directly, the other from the product of roots
        s = -(t + math.copysign(math.sqrt(disc), t))
        roots = tuple(sorted((s, q / s + 0.0)))
    return NormalizationSolution(roots, t, cn)


@dataclass
class CriticalSearchResult:
    found: bool
    endpoint: float | None
    right: float
    eps: float
    probes: list[dict] = field(default_factory=list)


def _null_dim(N, lo, hi, eps, nodes_per_panel, panel_length, gram_source=None):
    iv = Interval(lo, hi)
    rule = build_rule(iv, nodes_per_panel, min(panel_length, iv.length))
    G = gram_source(N, rule) if gram_source else build_gram(N, iv, rule)
    return null_space(eigendecompose(G), eps).dim


def critical_interval_search(
    N: int,
    eps: float = DEFAULT_EPS,
    left_range: Interval = Interval(-40.0, -1.0),
    right_fixed: float = 40.0,
    resolution: float = 0.1,
    nodes_per_panel: int = 40,
    panel_length: float = 1.0,
    gram_source=None,
) -> CriticalSearchResult:
    """Locate the left endpoint at which ``null(G(N, [a, right]))`` empties.

    Bisects ``a`` over ``left_range`` until the bracket is narrower than
    ``resolution``.  ``endpoint`` is the innermost probed ``a`` whose null
    space is empty; every probe and its null-space dimension is recorded, and
    monotonicity of the dimension in ``a`` is checked along the way.
    """
    probes: list[dict] = []

    def probe(a):
        d = _null_dim(N, a, right_fixed, eps, nodes_per_panel, panel_length, gram_source)
        probes.append({"left": a, "null_dim": d, "rank": N - d})
        return d

    wide, narrow = left_range.lo, left_range.hi
    if probe(wide) > 0:
        return CriticalSearchResult(False, None, right_fixed, eps, probes)
    if probe(narrow) == 0:
        return CriticalSearchResult(True, narrow, right_fixed, eps, probes)
    while narrow - wide > resolution:
        mid = 0.5 * (wide + narrow)
        if probe(mid) == 0:
            wide = mid
        else:
            narrow = mid
    _check_monotone(probes)
    return CriticalSearchResult(True, wide, right_fixed, eps, probes)


def _check_monotone(probes):
    pts = sorted((p["left"], p["null_dim"]) for p in probes)
    dims = [d for _, d in pts]
    if any(b < a for a, b in zip(dims, dims[1:])):
        raise ArithmeticError(f"null-space dimension not monotone in the left endpoint: {pts}")
