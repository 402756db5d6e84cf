"""Interval-truncated Hermite frames and the non-uniqueness of truncated wavepackets."""

from .frame import (
    DEFAULT_EPS,
    GramCache,
    GramMatrix,
    NullSpaceReport,
    SpectralDecomposition,
    TightnessReport,
    build_gram,
    eigendecompose,
    null_space,
    project,
    rank_profile,
    residual_norm_sq,
    tightness_report,
)
from .hermite import energy_level, energy_levels, eval_basis, eval_basis_column
from .quadrature import Interval, QuadratureRule, build_rule, gauss_legendre, integrate
from .wavepacket import (
    ObservableReport,
    PerturbationResult,
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

__version__ = "0.1.0"
