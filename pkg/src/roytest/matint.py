"""Closed form of the matrix integral

    I(z) = int_{0 < Y < I_m} det(Y)^beta det(I_m - z Y)^alpha tr(A Y)^nu dY

for rank-one Hermitian A with tr(A) = a, and the power-series identity that
ties it to the exact largest-eigenvalue CDF.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from ._logdet import adaptive_logdet
from .errors import DimensionError
from .exactcdf import _log_psi, _psi_mp, cdf_lambda_max, log_k_const
from .specfun import log_factorial, log_pochhammer

__all__ = [
    "MatIntParams",
    "log_kd",
    "zeta",
    "log_matrix_integral",
    "matrix_integral",
    "series_terms",
    "series_cdf",
    "series_consistency_residual",
]


@dataclass(frozen=True)
class MatIntParams:
    alpha: int
    beta: int
    nu: int
    m: int
    a: float = 1.0
    z: float = 0.5

    def __post_init__(self):
        for name in ("alpha", "beta", "nu"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise DimensionError(f"{name} must be a non-negative integer, got {v}")
        if int(self.m) != self.m or self.m < 1:
            raise DimensionError(f"m must be a positive integer, got {self.m}")
        if not self.a > 0:
            raise ValueError(f"a = tr(A) must be positive, got {self.a}")
        if not 0 < self.z < 1:
            raise ValueError(f"z must lie in (0, 1), got {self.z}")


def log_kd(m, n, p):
    """ln K_d(m, n, p) = -m(m-1)/2 ln(pi) + sum_k ln[(p+n-k)! / ((p-k)! (n-k)!)]."""
    if n < m or p < m:
        raise DimensionError(f"log_kd needs n, p >= m, got m={m}, n={n}, p={p}")
    total = -0.5 * m * (m - 1) * math.log(math.pi)
    for k in range(1, m + 1):
        total += log_factorial(p + n - k) - log_factorial(p - k) - log_factorial(n - k)
    return total


def _log_zeta(i, alpha, beta, nu, m):
    if not 1 <= i <= alpha + 1:
        raise DimensionError(f"zeta index i={i} outside 1..{alpha + 1}")
    big = alpha + beta + 2 * m + i - 2
    logs, signs = [], []
    for ell in range(min(alpha, nu) + 1):
        lp, sp = log_pochhammer(-ell - 1, i)
        if sp == 0:
            continue
        val = (log_factorial(nu) + lp + log_factorial(alpha + 1 - i) + log_factorial(big)
               - log_factorial(nu - ell) - log_factorial(ell + 1) - log_factorial(alpha - ell)
               - log_factorial(ell + beta + 2 * m + i - 2))
        logs.append(val)
        signs.append(sp * (-1) ** i)
    if not logs:
        return -math.inf, 0
    total, sign = logsumexp(logs, b=signs, return_sign=True)
    return float(total), int(sign)


def zeta(i, params):
    """First-column entry zeta_i of the matrix-integral determinant."""
    lg, s = _log_zeta(i, params.alpha, params.beta, params.nu, params.m)
    return s * math.exp(lg) if s else 0.0


def _zeta_mp(ctx, i, alpha, beta, nu, m):
    big = alpha + beta + 2 * m + i - 2
    total = ctx.mpf(0)
    f = ctx.factorial
    for ell in range(min(alpha, nu) + 1):
        total += ((-1) ** i * f(nu) * ctx.rf(-ell - 1, i) * f(alpha + 1 - i) * f(big)
                  / (f(nu - ell) * f(ell + 1) * f(alpha - ell) * f(ell + beta + 2 * m + i - 2)))
    return total


def log_matrix_integral(params):
    """Natural log of the (strictly positive) matrix integral."""
    alpha, beta, nu, m, a, z = (params.alpha, params.beta, params.nu, params.m,
                                params.a, params.z)
    t = z / (1.0 - z)
    size = alpha + 1
    logabs = np.full((size, size), -np.inf)
    sign = np.zeros((size, size))
    for i in range(1, size + 1):
        logabs[i - 1, 0], sign[i - 1, 0] = _log_zeta(i, alpha, beta, nu, m)
        for j in range(2, size + 1):
            logabs[i - 1, j - 1], sign[i - 1, j - 1] = _log_psi(i, j, beta, m, t)

    def build_mp(ctx):
        return ctx.matrix([[_zeta_mp(ctx, i, alpha, beta, nu, m)]
                           + [_psi_mp(ctx, i, j, beta, m, t) for j in range(2, size + 1)]
                           for i in range(1, size + 1)])

    det_sign, log_det, _ = adaptive_logdet(logabs, sign, build_mp)
    if det_sign <= 0:
        raise ArithmeticError(f"matrix integral determinant has sign {det_sign} for {params}")
    log_pref = (log_k_const(alpha, beta, m) - log_kd(m, m + alpha, m + beta)
                + log_pochhammer(m + beta, nu)[0] - log_pochhammer(alpha + beta + 2 * m, nu)[0]
                + nu * math.log(a) + m * alpha * math.log(z))
    return log_pref + log_det


def matrix_integral(params):
    return math.exp(log_matrix_integral(params))


def _log_term(dims, omega_a, z, nu):
    m, n, p = dims.m, dims.n, dims.p
    li = log_matrix_integral(MatIntParams(dims.alpha, dims.beta, nu, m, 1.0, z))
    lc = (log_pochhammer(n + p, nu)[0] - log_pochhammer(p, nu)[0] - log_factorial(nu)
          + (nu * math.log(z * omega_a) if nu else 0.0))
    return log_kd(m, n, p) - omega_a + m * p * math.log(z) + lc + li


def _check_series_dims(dims):
    if dims.n < dims.m or dims.p < dims.m:
        raise DimensionError(f"series identity needs n, p >= m, got {dims}")


def series_terms(dims, omega_a, z, count):
    """Logs of the first ``count`` terms of the power series of Pr{v_max <= z},
    v = lambda/(1+lambda).

    Term nu is K_d e^{-omega a} z^{mp} (n+p)_nu / ((p)_nu nu!) (z omega a)^nu I_nu(z), a = 1.
    With omega_a = 0 only the nu = 0 term is non-zero and only it is returned.
    """
    _check_series_dims(dims)
    count = 1 if omega_a == 0 else count
    return np.array([_log_term(dims, omega_a, z, nu) for nu in range(count)])


def series_cdf(dims, omega_a, z, max_terms=200, rtol=1e-14):
    """Sum the series until a term past the peak falls below ``rtol`` of the running total."""
    _check_series_dims(dims)
    logs = []
    for nu in range(1 if omega_a == 0 else max_terms):
        logs.append(_log_term(dims, omega_a, z, nu))
        if nu > 0 and logs[-1] < logs[-2] and logs[-1] - logsumexp(logs) < math.log(rtol):
            break
    return float(math.exp(logsumexp(logs)))


def series_consistency_residual(dims, omega_a, z, truncation):
    """|partial series (``truncation`` terms) - exact CDF at t = z/(1-z) with spike omega*a|."""
    if truncation < 1:
        raise ValueError("truncation must be at least 1")
    if not 0 < z < 1:
        raise ValueError(f"z must lie in (0, 1), got {z}")
    partial = float(np.exp(logsumexp(series_terms(dims, omega_a, z, truncation))))
    exact = cdf_lambda_max(dims, omega_a, z / (1.0 - z))
    return abs(partial - exact)
