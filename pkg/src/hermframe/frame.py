"""Gram matrices of interval-truncated Hermite functions and their null spaces.

Truncating an orthonormal family to a sub-interval keeps the frame tight but
destroys linear independence; the Gram matrix of the truncated functions then
has eigenvalues that sit at rounding level.  Everything here works with an
explicit tolerance ``eps`` on those eigenvalues.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .compensated import dd_matvec, dd_mul, dd_sum, two_prod
from .hermite import eval_basis
from .quadrature import Interval, QuadratureRule, build_rule

DEFAULT_EPS = 1e-12
GRAM_JSON_FORMAT = "hermframe.gram/1"


@dataclass(frozen=True)
class GramMatrix:
    """``g[m, n] = integral of psi_m psi_n over interval`` (0-based storage).

    ``entries`` is the double-precision matrix used for decompositions;
    ``entries_lo`` holds the rounding remainder so that ``entries +
    entries_lo`` reproduces the quadrature sums to double-double accuracy.
    """

    interval: Interval
    rule_key: tuple
    entries: np.ndarray = field(repr=False, compare=False)
    entries_lo: np.ndarray = field(repr=False, compare=False)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def quadratic_form(self, v) -> float:
        """``v^T G v`` evaluated in double-double arithmetic.

        Null vectors have ``v^T G v`` many orders below ``eps_machine * |G|``,
        so the plain product ``v @ G @ v`` is pure rounding noise for them.
        """
        v = np.asarray(v, dtype=float)
        if v.shape != (self.size,):
            raise ValueError(f"vector of length {v.size} does not match Gram size {self.size}")
        uh, ul = two_prod(v[:, None], v[None, :])
        th, tl = dd_mul(uh, ul, self.entries, self.entries_lo)
        h, l = dd_sum(th.ravel(), tl.ravel())
        return float(h + l)

    def apply(self, c) -> np.ndarray:
        return self.entries @ np.asarray(c)

    def to_json(self, eigenvalues=None) -> dict:
        d = {
            "format": GRAM_JSON_FORMAT,
            "size": self.size,
            "interval": [self.interval.lo, self.interval.hi],
            "rule": {"nodes_per_panel": self.rule_key[2], "panel_length": self.rule_key[3]},
            "entries": self.entries.ravel().tolist(),
            "entries_lo": self.entries_lo.ravel().tolist(),
        }
        if eigenvalues is not None:
            d["eigenvalues"] = np.asarray(eigenvalues).tolist()
        return d

    @classmethod
    def from_json(cls, d: dict) -> "GramMatrix":
        if d.get("format") != GRAM_JSON_FORMAT:
            raise ValueError(f"unrecognised Gram matrix format {d.get('format')!r}")
        n = int(d["size"])
        iv = Interval(*d["interval"])
        key = (iv.lo, iv.hi, int(d["rule"]["nodes_per_panel"]), float(d["rule"]["panel_length"]))
        hi = np.array(d["entries"], dtype=float).reshape(n, n)
        lo = np.array(d["entries_lo"], dtype=float).reshape(n, n)
        return cls(iv, key, hi, lo)


def build_gram(N: int, interval: Interval, rule: QuadratureRule | None = None) -> GramMatrix:
    """Assemble the Gram matrix of ``psi_1 .. psi_N`` restricted to ``interval``.

    Each entry is a double-double quadrature sum of exact node products;
    the upper triangle is computed and mirrored, so the result is symmetric
    bit for bit.
    """
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise ValueError(f"basis size must be a positive integer, got {N!r}")
    N = int(N)
    if rule is None:
        rule = build_rule(interval)
    if rule.interval != interval:
        raise ValueError(f"quadrature rule is on {rule.interval}, Gram requested on {interval}")

    B = np.ascontiguousarray(eval_basis(rule.nodes, N).T)  # (N, nodes)
    w = np.asarray(rule.weights)
    hi = np.empty((N, N))
    lo = np.empty((N, N))
    for m in range(N):
        ah, al = two_prod(w, B[m])
        ph, pl = dd_mul(ah[None, :], al[None, :], B[m:], 0.0)
        sh, sl = dd_sum(ph, pl, axis=-1)
        hi[m, m:] = sh
        hi[m:, m] = sh
        lo[m, m:] = sl
        lo[m:, m] = sl
    return GramMatrix(interval, rule.key(), hi, lo)


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns, sign-normalized

    @property
    def size(self) -> int:
        return self.eigenvalues.size


def _sign_normalize(V: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(V), axis=0)
    s = np.sign(V[idx, np.arange(V.shape[1])])
    s[s == 0] = 1.0
    return V * s


def eigendecompose(G: GramMatrix | np.ndarray) -> SpectralDecomposition:
    """Full symmetric eigendecomposition, eigenvalues ascending.

    Each eigenvector's largest-magnitude component is made positive.
    """
    A = G.entries if isinstance(G, GramMatrix) else np.asarray(G, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise FloatingPointError("matrix has non-finite entries")
    try:
        lam, V = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise ArithmeticError(f"symmetric eigensolver failed: {exc}") from exc
    V = _sign_normalize(V)
    lam.setflags(write=False)
    V.setflags(write=False)
    return SpectralDecomposition(lam, V)


@dataclass(frozen=True)
class NullSpaceReport:
    tolerance_eps: float
    eigenvalues: np.ndarray
    basis: np.ndarray  # (N, dim) columns
    size: int

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def rank(self) -> int:
        return self.size - self.dim

    @property
    def residuals(self) -> np.ndarray:
        """``sqrt(lambda)`` per basis vector (negative rounding clipped to 0)."""
        return np.sqrt(np.clip(self.eigenvalues, 0.0, None))

    def vector(self, index: int = 0) -> np.ndarray:
        if not 0 <= index < self.dim:
            raise IndexError(f"null-vector index {index} out of range for dimension {self.dim}")
        return self.basis[:, index].copy()


def null_space(dec: SpectralDecomposition, eps: float = DEFAULT_EPS) -> NullSpaceReport:
    """Eigenvectors whose eigenvalue is ``<= eps``, smallest eigenvalue first."""
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    mask = dec.eigenvalues <= eps
    return NullSpaceReport(
        float(eps), dec.eigenvalues[mask].copy(), dec.eigenvectors[:, mask].copy(), dec.size
    )


def rank_profile(dec: SpectralDecomposition, eps_values=(1e-10, 1e-12, 1e-14)) -> dict:
    return {f"{e:g}": int(np.count_nonzero(dec.eigenvalues > e)) for e in eps_values}


@dataclass(frozen=True)
class TightnessReport:
    f_norm_sq: float
    partial_sums: np.ndarray

    @property
    def defect(self) -> float:
        return self.f_norm_sq - float(self.partial_sums[-1])


def tightness_report(c, G: GramMatrix) -> TightnessReport:
    """Bessel sums of the frame coefficients of ``f = sum c_m psi'_m``.

    The frame coefficients are ``<psi'_n, f> = (G c)_n`` and ``||f||^2 =
    c^T G c``.  For a finite family the defect is non-negative and tends to
    zero as the family grows.
    """
    c = np.asarray(c, dtype=float)
    if c.shape != (G.size,):
        raise ValueError(f"coefficient length {c.size} does not match Gram size {G.size}")
    gh, gl = dd_matvec(G.entries, c)
    coef = gh + (gl + G.entries_lo @ c)
    sq = (coef * coef).tolist()
    partial = np.array([math.fsum(sq[: m + 1]) for m in range(len(sq))])
    return TightnessReport(G.quadratic_form(c), partial)


def project(c, M: int, G: GramMatrix, x_grid) -> np.ndarray:
    """Samples of ``f^M = sum_{i<=M} psi'_i <psi'_i, f>`` on ``x_grid``.

    ``f`` is given by its expansion ``c`` in the truncated functions; the
    result is zero outside ``G.interval``.
    """
    c = np.asarray(c, dtype=float)
    if c.shape != (G.size,):
        raise ValueError(f"coefficient length {c.size} does not match Gram size {G.size}")
    if not 1 <= M <= G.size:
        raise ValueError(f"subset size must lie in [1, {G.size}], got {M}")
    x = np.asarray(x_grid, dtype=float)
    coef = (G.entries @ c)[:M]
    vals = eval_basis(x, M) @ coef
    return np.where(G.interval.indicator(x) > 0, vals, 0.0)


def synthesize_truncated(c, interval: Interval, x_grid) -> np.ndarray:
    """``sum_n c_n psi'_n(x)`` with the interval's characteristic function applied."""
    c = np.asarray(c, dtype=float)
    x = np.asarray(x_grid, dtype=float)
    vals = eval_basis(x, c.size) @ c
    return np.where(interval.indicator(x) > 0, vals, 0.0)


def residual_norm_sq(v, rule: QuadratureRule) -> float:
    """``||sum_n v_n psi'_n||^2`` over ``rule.interval`` by quadrature.

    Samples are formed in double-double so that the norm of a near-null
    combination is not swamped by cancellation in the synthesis.
    """
    v = np.asarray(v, dtype=float)
    B = eval_basis(rule.nodes, v.size)
    fh, fl = dd_matvec(B, v)
    sh, sl = dd_mul(fh, fl, fh, fl)
    th, tl = dd_mul(sh, sl, np.asarray(rule.weights), 0.0)
    h, l = dd_sum(th, tl)
    return float(h + l)


class GramCache:
    """On-disk JSON cache of Gram matrices keyed by (N, interval, rule)."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def path_for(self, N: int, rule: QuadratureRule) -> Path:
        lo, hi, k, h = rule.key()
        name = f"gram_N{N}_lo{lo!r}_hi{hi!r}_k{k}_h{h!r}.json"
        return self.root / name

    def load(self, N: int, rule: QuadratureRule) -> GramMatrix | None:
        p = self.path_for(N, rule)
        if not p.exists():
            return None
        try:
            G = GramMatrix.from_json(json.loads(p.read_text()))
        except (ValueError, KeyError, json.JSONDecodeError):
            return None
        if G.size != N or G.rule_key != rule.key():
            return None
        return G

    def store(self, G: GramMatrix, eigenvalues=None) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        rule = build_rule(G.interval, G.rule_key[2], G.rule_key[3])
        p = self.path_for(G.size, rule)
        tmp = p.with_suffix(".tmp")
        tmp.write_text(json.dumps(G.to_json(eigenvalues)))
        tmp.replace(p)
        return p

    def get_or_build(self, N: int, rule: QuadratureRule) -> GramMatrix:
        G = self.load(N, rule)
        if G is None:
            G = build_gram(N, rule.interval, rule)
            self.store(G, eigendecompose(G).eigenvalues)
        return G


def pointwise_residual(v, interval: Interval, npts: int = 2000) -> float:
    """Sup of ``|sum v_n psi_n|`` over a uniform grid on ``interval``."""
    x = np.linspace(interval.lo, interval.hi, npts)
    return float(np.max(np.abs(eval_basis(x, len(v)) @ np.asarray(v, dtype=float))))


__all__ = [
    "DEFAULT_EPS",
    "GramMatrix",
    "SpectralDecomposition",
    "NullSpaceReport",
    "TightnessReport",
    "GramCache",
    "build_gram",
    "eigendecompose",
    "null_space",
    "rank_profile",
    "tightness_report",
    "project",
    "synthesize_truncated",
    "residual_norm_sq",
    "pointwise_residual",
]

