"""Composite Gauss-Legendre quadrature on finite intervals."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` used as a truncation domain."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError(f"interval endpoints must be finite, got [{lo}, {hi}]")
        if not lo < hi:
            raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def indicator(self, x) -> np.ndarray:
        """Characteristic function of the interval sampled at ``x``."""
        x = np.asarray(x, dtype=float)
        return ((x >= self.lo) & (x <= self.hi)).astype(float)

    def contains(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi


@lru_cache(maxsize=64)
def _gauss_legendre(k: int, tol: float = 1e-15) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the k-point rule on [-1, 1] by Newton iteration."""
    i = np.arange(1, k + 1)
    # Tricomi initial guess, accurate to O(k^-4)
    x = (1 - (k - 1) / (8.0 * k**3)) * np.cos(np.pi * (i - 0.25) / (k + 0.5))
    for _ in range(100):
        p0 = np.ones_like(x)
        p1 = x.copy()
        for j in range(2, k + 1):
            p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
        dp = k * (x * p1 - p0) / (x * x - 1)
        dx = p1 / dp
        x = x - dx
        if np.max(np.abs(dx)) <= tol:
            break
    else:
        raise ArithmeticError(f"Gauss-Legendre Newton iteration did not converge for k={k}")
    # one more derivative evaluation at the converged nodes
    p0 = np.ones_like(x)
    p1 = x.copy()
    for j in range(2, k + 1):
        p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
    dp = k * (x * p1 - p0) / (x * x - 1)
    w = 2.0 / ((1 - x * x) * dp * dp)
    # symmetrize and sort ascending
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    order = np.argsort(x)
    x, w = x[order], w[order]
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(k: int) -> tuple[np.ndarray, np.ndarray]:
    """k-point Gauss-Legendre nodes (ascending) and weights on ``[-1, 1]``."""
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise ValueError(f"rule order must be a positive integer, got {k!r}")
    return _gauss_legendre(int(k))


@dataclass(frozen=True)
class QuadratureRule:
    interval: Interval
    nodes_per_panel: int
    panel_length: float
    nodes: np.ndarray = field(repr=False, compare=False)
    weights: np.ndarray = field(repr=False, compare=False)

    @property
    def panel_count(self) -> int:
        return self.nodes.size // self.nodes_per_panel

    def __len__(self) -> int:
        return self.nodes.size

    def key(self) -> tuple:
        return (self.interval.lo, self.interval.hi, self.nodes_per_panel, self.panel_length)


def build_rule(interval: Interval, nodes_per_panel: int = 40, panel_length: float = 1.0) -> QuadratureRule:
    """Composite rule with ``ceil(length / panel_length)`` equal panels.

    The panels are stretched uniformly so that they tile ``interval`` exactly.
    """
    if isinstance(nodes_per_panel, bool) or int(nodes_per_panel) != nodes_per_panel or nodes_per_panel < 2:
        raise ValueError(f"nodes_per_panel must be an integer >= 2, got {nodes_per_panel!r}")
    panel_length = float(panel_length)
    if not (0 < panel_length <= interval.length):
        raise ValueError(
            f"panel_length must lie in (0, {interval.length}], got {panel_length}"
        )
    npan = math.ceil(interval.length / panel_length - 1e-12)
    t, w = gauss_legendre(int(nodes_per_panel))
    edges = np.linspace(interval.lo, interval.hi, npan + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(interval, int(nodes_per_panel), panel_length, nodes, weights)


def integrate(rule: QuadratureRule, integrand: Callable[[np.ndarray], np.ndarray] | np.ndarray) -> float:
    """``sum(w_i f(x_i))`` with exactly rounded summation.

    ``integrand`` is either a vectorized callable or the samples at
    ``rule.nodes``.
    """
    f = integrand(rule.nodes) if callable(integrand) else integrand
    f = np.asarray(f, dtype=float)
    if f.shape != rule.nodes.shape:
        raise ValueError(f"integrand samples have shape {f.shape}, expected {rule.nodes.shape}")
    bad = ~np.isfinite(f)
    if bad.any():
        i = int(np.argmax(bad))
        raise FloatingPointError(f"non-finite integrand value {f[i]} at node x={float(rule.nodes[i])!r}")
    return math.fsum(rule.weights * f)
