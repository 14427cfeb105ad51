import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import trapezoid
from scipy.special import eval_jacobi
from scipy.stats import norm

from roytest.specfun import (JacobiParams, Tw2Table, gaussian_q, jacobi_derivative, jacobi_eval,
                             jacobi_eval_scaled, jacobi_series, log_factorial, log_pochhammer,
                             tw2_cdf, tw2_quantile, tw2_table)


def test_log_factorial_small():
    for n in range(60):
        assert log_factorial(n) == pytest.approx(math.log(math.factorial(n)), rel=1e-14, abs=1e-14)
    with pytest.raises(ValueError):
        log_factorial(-1)


@given(a=st.floats(0.01, 60.0), k=st.integers(0, 40))
def test_log_pochhammer_positive(a, k):
    lg, s = log_pochhammer(a, k)
    assert s == 1
    assert lg == pytest.approx(float(mpmath.log(mpmath.rf(a, k))), rel=1e-12, abs=1e-12)


@given(a=st.integers(-15, -1), k=st.integers(0, 20))
def test_log_pochhammer_negative_integer(a, k):
    lg, s = log_pochhammer(a, k)
    ref = mpmath.rf(a, k)
    if ref == 0:
        assert s == 0 and lg == -math.inf
    else:
        assert s == mpmath.sign(ref)
        assert lg == pytest.approx(float(mpmath.log(abs(ref))), rel=1e-12, abs=1e-12)


@given(a=st.floats(-20.0, -0.01).filter(lambda v: abs(v - round(v)) > 1e-3),
       k=st.integers(0, 15))
def test_log_pochhammer_negative_real(a, k):
    lg, s = log_pochhammer(a, k)
    ref = mpmath.rf(a, k)
    assert s == mpmath.sign(ref)
    assert lg == pytest.approx(float(mpmath.log(abs(ref))), rel=1e-10, abs=1e-10)


def test_pochhammer_empty_product():
    assert log_pochhammer(-3, 0) == (0.0, 1)
    assert log_pochhammer(7.5, 0) == (0.0, 1)


@given(n=st.integers(0, 30), a=st.integers(0, 12), b=st.integers(0, 40),
       x=st.floats(-1.0, 25.0))
def test_jacobi_against_scipy(n, a, b, x):
    ref = eval_jacobi(n, a, b, x)
    assert jacobi_eval(JacobiParams(n, a, b), x) == pytest.approx(ref, rel=1e-9, abs=1e-9)


@given(n=st.integers(0, 20), a=st.integers(0, 8), b=st.integers(0, 20), x=st.floats(1.0, 9.0))
def test_jacobi_recurrence_matches_hypergeometric(n, a, b, x):
    # the 2F1 series has positive terms for x >= 1, so it is a clean oracle there
    assert jacobi_eval(JacobiParams(n, a, b), x) == pytest.approx(
        jacobi_series(JacobiParams(n, a, b), x), rel=1e-11)


def test_jacobi_scaled_survives_overflow():
    n, a, b, x = 400, 30, 500, 41.0
    mant, log_scale = jacobi_eval_scaled(n, a, b, x)
    ref = mpmath.log(mpmath.jacobi(n, a, b, x))
    assert math.log(mant) + log_scale == pytest.approx(float(ref), rel=1e-12)


@given(n=st.integers(0, 12), k=st.integers(0, 14), a=st.integers(0, 5), b=st.integers(0, 8),
       x=st.floats(1.0, 6.0))
def test_jacobi_derivative(n, k, a, b, x):
    got = jacobi_derivative(JacobiParams(n, a, b), k, x)
    if k > n:
        assert got == 0.0
        return
    ref = mpmath.diff(lambda y: mpmath.jacobi(n, a, b, y), x, k)
    assert got == pytest.approx(float(ref), rel=1e-8, abs=1e-8)


def test_jacobi_params_validation():
    with pytest.raises(ValueError):
        JacobiParams(-1, 0, 0)
    with pytest.raises(ValueError):
        JacobiParams(2, -1, 0)


@given(x=st.floats(-8, 30))
def test_gaussian_q(x):
    assert gaussian_q(x) == pytest.approx(norm.sf(x), rel=1e-12, abs=1e-300)


def test_tw2_table_against_painleve(painleve):
    table = tw2_table()
    idx = np.arange(0, len(table.grid), 10)
    assert np.max(np.abs(table.cdf[idx] - painleve(table.grid[idx]))) < 1e-9


def test_tw2_moments():
    # literature values for the F2 mean and variance
    s = np.linspace(-10, 6, 20001)
    dens = tw2_table().density(s)
    mean = trapezoid(s * dens, s)
    var = trapezoid((s - mean) ** 2 * dens, s)
    assert mean == pytest.approx(-1.7710868074, abs=1e-6)
    assert var == pytest.approx(0.8131947928, abs=1e-5)


@given(q=st.floats(1e-6, 1 - 1e-6))
def test_tw2_quantile_roundtrip(q):
    assert tw2_cdf(tw2_quantile(q)) == pytest.approx(q, abs=1e-9)


def test_tw2_outside_grid_and_monotone():
    assert tw2_cdf(-50.0) == 0.0
    assert tw2_cdf(50.0) == 1.0
    vals = tw2_cdf(np.linspace(-12, 8, 3001))
    assert np.all(np.diff(vals) >= 0)
    with pytest.raises(ValueError):
        tw2_quantile(1.0)


def test_tw2_table_rejects_bad_input():
    with pytest.raises(ValueError):
        Tw2Table.from_text("# tw2 table version 1\ns,F2\n0,0.5\n-1,0.4\n1,0.9\n")
    with pytest.raises(ValueError):
        Tw2Table.from_text("# tw2 table version 1\ns,F2\n0,0.5\n1,0.4\n2,0.9\n")
