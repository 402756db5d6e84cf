import math

import mpmath
import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hermframe.hermite import energy_level, energy_levels, eval_basis, eval_basis_column, eval_basis_scaled


def mp_psi(n, x, dps=80):
    """psi_n(x), 1-based, from mpmath's Hermite polynomial at high precision."""
    with mpmath.workdps(dps):
        x = mpmath.mpf(x)
        k = n - 1
        return mpmath.exp(-x * x / 2) * mpmath.hermite(k, x) / mpmath.sqrt(
            mpmath.mpf(2) ** k * mpmath.factorial(k) * mpmath.sqrt(mpmath.pi)
        )


def test_ground_state_at_origin():
    v = eval_basis_column(0.0, 1)
    assert v[0] == pytest.approx(math.pi**-0.25, rel=1e-15)
    assert v[0] == pytest.approx(0.7511255444649425, rel=1e-15)


def test_second_function_vanishes_at_origin():
    assert eval_basis_column(0.0, 2)[1] == 0.0


def test_matches_exact_rational_hermite_at_two():
    X = sympy.Symbol("x")
    got = eval_basis_column(2.0, 6)
    for n in range(1, 7):
        k = n - 1
        poly = sympy.hermite(k, X)
        expr = sympy.exp(-X**2 / 2) * poly / sympy.sqrt(2**k * sympy.factorial(k) * sympy.sqrt(sympy.pi))
        want = float(expr.subs(X, 2).evalf(30))
        assert got[k] == pytest.approx(want, rel=1e-13)


@pytest.mark.parametrize("x", [-7.5, -1.0, 0.3, 5.0, 12.0, 17.0, 25.0])
def test_against_high_precision_oracle(x):
    N = 160
    got = eval_basis_column(x, N)
    scale = max(abs(float(mp_psi(n, x))) for n in range(1, N + 1))
    for n in (1, 2, 3, 40, 81, 120, 159, 160):
        want = float(mp_psi(n, x))
        assert abs(got[n - 1] - want) <= 1e-12 * max(abs(want), scale * 1e-3) + 1e-300


def test_no_premature_underflow_at_thirty():
    got = eval_basis_column(30.0, 160)
    for n in range(1, 161):
        want = mp_psi(n, 30.0)
        assert abs(want) > 1e-300
        assert got[n - 1] != 0.0
        assert got[n - 1] == pytest.approx(float(want), rel=1e-12)


def test_scaled_representation_survives_beyond_double_range():
    # psi_1(40) = exp(-800)/pi^(1/4) ~ 1e-348 is below the double range
    mant, expo = eval_basis_scaled(40.0, 3)
    want = mp_psi(1, 40.0)
    got = mpmath.ldexp(mpmath.mpf(mant[0, 0]), int(expo[0, 0]))
    assert abs(got / want - 1) < 1e-13
    assert eval_basis_column(40.0, 1)[0] == 0.0


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=-30, max_value=30, allow_nan=False), st.integers(min_value=2, max_value=158))
def test_three_term_recurrence(x, n):
    v = eval_basis_column(x, n + 1)
    lhs = v[n]
    a = math.sqrt(2.0 / n) * x * v[n - 1]
    b = math.sqrt((n - 1) / n) * v[n - 2]
    dominant = max(abs(a), abs(b), abs(lhs))
    assert abs(lhs - (a - b)) <= 1e-12 * dominant + 1e-300


@settings(max_examples=80, deadline=None)
@given(st.floats(min_value=-45, max_value=45, allow_nan=False))
def test_parity_is_bit_exact(x):
    N = 160
    pos = eval_basis_column(x, N)
    neg = eval_basis_column(-x, N)
    sign = (-1.0) ** np.arange(N)
    np.testing.assert_array_equal(neg, sign * pos)


def test_vectorized_matches_columns():
    x = np.array([-3.0, 0.0, 1.5, 22.0])
    M = eval_basis(x, 50)
    for i, xi in enumerate(x):
        np.testing.assert_array_equal(M[i], eval_basis_column(xi, 50))


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_non_finite_argument_rejected(bad):
    with pytest.raises(ValueError):
        eval_basis_column(bad, 3)


@pytest.mark.parametrize("N", [0, -1, 2.5])
def test_bad_size_rejected(N):
    with pytest.raises(ValueError):
        eval_basis_column(0.0, N)


@pytest.mark.parametrize("n, e", [(1, 0.5), (2, 1.5), (160, 159.5)])
def test_energy_level(n, e):
    assert energy_level(n) == e


def test_energy_levels_increasing():
    e = energy_levels(160)
    assert e[0] == 0.5 and np.all(np.diff(e) == 1.0)


@pytest.mark.parametrize("n", [0, -3])
def test_energy_level_domain(n):
    with pytest.raises(ValueError):
        energy_level(n)
