"""Double-double helpers for sums and products that must survive cancellation.

A value is carried as an unevaluated pair ``hi + lo`` with ``|lo| <= ulp(hi)/2``.
Products use Veltkamp splitting, so operands must stay well below 1e300.
"""

from __future__ import annotations

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    """Exact product ``a*b == p + e`` (barring underflow)."""
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def dd_add(ah, al, bh, bl):
    s, e = two_sum(ah, bh)
    e = e + (al + bl)
    return two_sum(s, e)


def dd_mul(ah, al, bh, bl):
    p, e = two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return two_sum(p, e)


def dd_sum(hi, lo=None, axis=-1):
    """Pairwise double-double reduction of ``hi + lo`` along ``axis``."""
    hi = np.moveaxis(np.asarray(hi, dtype=float), axis, -1)
    lo = np.zeros_like(hi) if lo is None else np.moveaxis(np.asarray(lo, dtype=float), axis, -1)
    while hi.shape[-1] > 1:
        n = hi.shape[-1]
        if n % 2:
            pad = [(0, 0)] * (hi.ndim - 1) + [(0, 1)]
            hi = np.pad(hi, pad)
            lo = np.pad(lo, pad)
        hi, lo = dd_add(hi[..., 0::2], lo[..., 0::2], hi[..., 1::2], lo[..., 1::2])
    if hi.shape[-1] == 0:
        z = np.zeros(hi.shape[:-1])
        return z, z.copy()
    return hi[..., 0], lo[..., 0]


def dd_matvec(A, x):
    """``A @ x`` for double matrices/vectors, returned as a (hi, lo) pair."""
    p, e = two_prod(np.asarray(A, dtype=float), np.asarray(x, dtype=float)[None, :])
    return dd_sum(p, e, axis=-1)
