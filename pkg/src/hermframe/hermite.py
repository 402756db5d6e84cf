"""Normalized harmonic-oscillator eigenfunctions (Hermite functions).

Indexing is 1-based: ``psi_n`` has polynomial degree ``n - 1`` and energy
``n - 1/2`` in units hbar = omega = m = 1.  Column ``k`` of every returned
array holds ``psi_{k+1}``.

The functions are generated by the three-term recurrence of the normalized
functions themselves, so neither ``H_n(x)`` nor ``2**(n-1) (n-1)!`` is ever
formed.  A base-2 exponent is carried beside the mantissa so that the
Gaussian factor ``exp(-x**2/2)`` cannot underflow before the polynomial
growth has been applied.
"""

from __future__ import annotations

import math

import numpy as np

# mantissas are pulled back into this window after every step
_RESCALE_HI = 2.0**512
_RESCALE_LO = 2.0**-512
_LOG2E = 1.0 / math.log(2.0)
_PI_QUARTER = math.pi**-0.25


def _check_size(N: int) -> int:
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise ValueError(f"basis size must be a positive integer, got {N!r}")
    return int(N)


def eval_basis_scaled(x, N: int) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate ``psi_1 .. psi_N`` as mantissa/exponent pairs.

    Parameters
    ----------
    x : array_like
        1-D array (or scalar) of finite abscissae.
    N : int
        Number of basis functions.

    Returns
    -------
    mant : ndarray, shape (len(x), N)
    expo : ndarray of int64, shape (len(x), N)
        ``psi_n(x_i) == ldexp(mant[i, n-1], expo[i, n-1])`` up to rounding.
    """
    N = _check_size(N)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.ndim != 1:
        raise ValueError("x must be a scalar or a 1-D array")
    if not np.all(np.isfinite(x)):
        raise ValueError("non-finite abscissa passed to Hermite evaluation")

    # exp(-x^2/2) = 2**(-x^2/(2 ln 2)); split into integer and fractional parts
    log2g = -0.5 * x * x * _LOG2E
    e = np.floor(log2g)
    cur = _PI_QUARTER * np.exp2(log2g - e)
    e = e.astype(np.int64)

    mant = np.empty((x.size, N))
    expo = np.empty((x.size, N), dtype=np.int64)
    mant[:, 0] = cur
    expo[:, 0] = e
    if N == 1:
        return mant, expo

    prev = np.zeros_like(cur)
    cur, prev = math.sqrt(2.0) * x * cur, cur
    mant[:, 1] = cur
    expo[:, 1] = e
    for n in range(2, N):
        # psi_{n+1} = sqrt(2/n) x psi_n - sqrt((n-1)/n) psi_{n-1}
        nxt = math.sqrt(2.0 / n) * x * cur - math.sqrt((n - 1) / n) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > _RESCALE_HI
        if big.any():
            cur[big] *= _RESCALE_LO
            prev[big] *= _RESCALE_LO
            e[big] += 512
        mant[:, n] = cur
        expo[:, n] = e
    return mant, expo


def eval_basis(x, N: int) -> np.ndarray:
    """Values of ``psi_1 .. psi_N`` at each point of ``x``.

    Returns an array of shape ``(len(x), N)``; entries underflow to zero only
    when the true value is below the double-precision range.
    """
    mant, expo = eval_basis_scaled(x, N)
    return np.ldexp(mant, np.clip(expo, -10000, 10000).astype(np.int32))


def eval_basis_column(x: float, N: int) -> np.ndarray:
    """The vector ``[psi_1(x), ..., psi_N(x)]`` at a single point."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite abscissa {x!r}")
    return eval_basis(np.array([x]), N)[0]


def energy_level(n: int) -> float:
    """Oscillator energy of the ``n``-th state, ``n - 1/2``."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"basis index must be >= 1, got {n!r}")
    return n - 0.5


def energy_levels(N: int) -> np.ndarray:
    N = _check_size(N)
    return np.arange(1, N + 1) - 0.5
