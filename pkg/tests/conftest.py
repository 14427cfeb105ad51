"""Shared oracles and hypothesis profile."""
import math
import os

import mpmath
import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from scipy.integrate import quad, solve_ivp
from scipy.special import airy

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=200)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def cdf_mp(m, n, p, omega, t, dps=80):
    """Independent high-precision evaluation of the exact largest-root CDF (n, p >= m),
    using mpmath's own Jacobi polynomials and determinant."""
    with mpmath.workdps(dps):
        t = mpmath.mpf(t)
        omega = mpmath.mpf(omega)
        al, be = n - m, p - m
        f = mpmath.factorial
        k_const = mpmath.mpf(1)
        for j in range(al):
            k_const *= f(be + 2 * m + j - 1) / f(be + 2 * m + 2 * j)
        mat = mpmath.matrix(al + 1, al + 1)
        x = omega * t / (1 + t)
        for i in range(1, al + 2):
            big = al + be + 2 * m + i - 2
            mat[i - 1, 0] = mpmath.fsum(
                f(al + 1 - i) * f(big) / (f(k) * f(al + 1 - i - k) * f(big - k))
                * (x ** (al - k) if al > k else 1)
                for k in range(al + 2 - i))
            for j in range(2, al + 2):
                deg = m + i - j
                mat[i - 1, j - 1] = (mpmath.rf(be + m + i - 1, j - 2)
                                     * mpmath.jacobi(deg, j - 2, be + j - 2, 2 / t + 1)
                                     if deg >= 0 else 0)
        val = (k_const * mpmath.exp(-omega / (1 + t))
               * (t / (1 + t)) ** (m * (al + be + m)) * mpmath.det(mat))
        return float(val)


class PainleveTW2:
    """F2(s) = exp(-int_s^inf (x - s) q(x)^2 dx), q the Hastings-McLeod solution of
    q'' = s q + 2 q^3, integrated backwards from the Airy asymptotics."""

    def __init__(self, start=8.0, stop=-10.5):
        ai, aip, _, _ = airy(start)
        u0 = quad(lambda x: airy(x)[0] ** 2, start, np.inf, epsabs=1e-30, limit=200)[0]
        v0 = quad(lambda x: x * airy(x)[0] ** 2, start, np.inf, epsabs=1e-30, limit=200)[0]

        def rhs(x, y):
            q, qp, _, _ = y
            return [qp, 2 * q ** 3 + x * q, -q * q, -x * q * q]

        self.start = start
        self._sol = solve_ivp(rhs, [start, stop], [ai, aip, u0, v0], method="DOP853",
                              rtol=1e-13, atol=1e-30, dense_output=True)

    def __call__(self, s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        out = np.empty_like(s)
        for k, x in enumerate(s):
            if x >= self.start:
                # tail: 1 - F2 is below the integrated Airy kernel, ~1e-20 here
                out[k] = 1.0
                continue
            _, _, u, v = self._sol.sol(x)
            out[k] = math.exp(-(v - x * u))
        return out


@pytest.fixture(scope="session")
def painleve():
    return PainleveTW2()


@pytest.fixture(scope="session")
def mp_cdf():
    return cdf_mp
