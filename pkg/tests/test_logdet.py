import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from roytest._logdet import adaptive_logdet, signed_logdet


def _split(mat):
    with np.errstate(divide="ignore"):
        return np.log(np.abs(mat)), np.sign(mat)


@given(seed=st.integers(0, 2**32 - 1), size=st.integers(1, 8))
def test_matches_slogdet(seed, size):
    rng = np.random.default_rng(seed)
    mat = rng.standard_normal((size, size))
    s, ld, _, _ = signed_logdet(*_split(mat))
    ref_s, ref_ld = np.linalg.slogdet(mat)
    assert s == ref_s
    assert ld == pytest.approx(ref_ld, rel=1e-10, abs=1e-10)


def test_extreme_row_and_column_scales():
    rng = np.random.default_rng(3)
    base = rng.standard_normal((5, 5))
    rows = np.array([300.0, -200.0, 0.0, 150.0, -400.0])
    cols = np.array([-250.0, 100.0, 350.0, 0.0, -50.0])
    logabs, sign = _split(base)
    logabs = logabs + rows[:, None] + cols[None, :]
    s, ld, _, _ = signed_logdet(logabs, sign)
    ref_s, ref_ld = np.linalg.slogdet(base)
    assert s == ref_s
    assert ld == pytest.approx(ref_ld + rows.sum() + cols.sum(), rel=1e-12)


def test_zero_row_is_singular():
    logabs = np.zeros((3, 3))
    sign = np.ones((3, 3))
    sign[1] = 0
    s, ld, _, _ = signed_logdet(logabs, sign)
    assert s == 0 and ld == -np.inf


def test_adaptive_falls_back_on_hilbert():
    size = 12
    with mpmath.workdps(60):
        hilbert = mpmath.hilbert(size)
        ref = float(mpmath.log(mpmath.det(hilbert)))
    mat = np.array([[1.0 / (i + j + 1) for j in range(size)] for i in range(size)])
    calls = []

    def build(ctx):
        calls.append(ctx.dps)
        return ctx.matrix([[ctx.mpf(1) / (i + j + 1) for j in range(size)] for i in range(size)])

    s, ld, _ = adaptive_logdet(*_split(mat), build)
    assert calls, "ill-conditioned matrix should use extended precision"
    assert s == 1.0
    assert ld == pytest.approx(ref, rel=1e-14)


def test_adaptive_skips_mp_when_well_conditioned():
    def build(ctx):
        raise AssertionError("should not be called")

    s, ld, _ = adaptive_logdet(*_split(np.eye(4) * 3.0), build)
    assert s == 1.0 and ld == pytest.approx(4 * math.log(3.0))
