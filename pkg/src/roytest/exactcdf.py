"""Exact finite-dimensional CDF of the largest eigenvalue of a complex
non-central F-matrix S^{-1/2} R S^{-1/2} with rank-one non-centrality.

R ~ CW_m(p, Sigma, Omega), S ~ CW_m(n, Sigma), omega = tr(Omega). With
alpha = n - m and beta = p - m the CDF is a determinant of size alpha + 1,
so cost is driven by n - m rather than by m.

All determinant entries are built as (log|x|, sign) pairs; prefactors join
in the log domain and are exponentiated once at the end. Determinants whose
equilibrated condition number exceeds 1e4 are rebuilt and evaluated with
mpmath (see ``_logdet.adaptive_logdet``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import wraps

import numpy as np
from scipy.optimize import brentq

from ._logdet import adaptive_logdet
from .errors import DimensionError, NumericRangeError
from .specfun import jacobi_eval_scaled, jacobi_recurrence, log_factorial, log_pochhammer

__all__ = [
    "ModelDims",
    "CdfEvaluation",
    "log_k_const",
    "phi",
    "psi",
    "evaluate_cdf",
    "cdf_lambda_max",
    "cdf_alpha0",
    "cdf_central",
    "cdf_singular",
    "cdf",
    "cdf_test_statistic",
    "quantile",
    "relabel_singular",
    "limiting_scaled_cdf",
]

# Slack allowed before a computed CDF value is treated as a numeric failure.
_RANGE_SLACK = 1e-8


@dataclass(frozen=True)
class ModelDims:
    """System dimension m, noise-only sample count n, signal-bearing sample count p."""

    m: int
    n: int
    p: int

    def __post_init__(self):
        for name in ("m", "n", "p"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise DimensionError(f"{name} must be a positive integer, got {v}")
            object.__setattr__(self, name, int(v))

    @property
    def alpha(self):
        return self.n - self.m

    @property
    def beta(self):
        return self.p - self.m

    @property
    def c(self):
        """Test-statistic scale p/n: lambda_hat = lambda / c."""
        return self.p / self.n

    @property
    def singular(self):
        return self.p < self.m


@dataclass(frozen=True)
class CdfEvaluation:
    t: float
    value: float
    log_scale_used: float


def _check_nonsingular(dims):
    if dims.n < dims.m:
        raise DimensionError(f"need n >= m for an invertible noise covariance estimate, got {dims}")
    if dims.p < dims.m:
        raise DimensionError(f"p < m is the singular case; use cdf_singular for {dims}")


def _check_omega(omega):
    if not omega >= 0 or not math.isfinite(omega):
        raise ValueError(f"omega must be finite and non-negative, got {omega}")


def _over_t(fn):
    """Let a scalar-t CDF accept array arguments (last positional argument)."""

    @wraps(fn)
    def wrapper(*args, **kwargs):
        *head, t = args
        if np.ndim(t):
            flat = [fn(*head, float(v), **kwargs) for v in np.ravel(t)]
            return np.reshape(np.array(flat), np.shape(t))
        return fn(*head, t, **kwargs)

    return wrapper


def log_k_const(alpha, beta, m):
    """ln K(alpha, beta, m) = sum_{j<alpha} ln[(beta+2m+j-1)! / (beta+2m+2j)!]; K(0, ., .) = 1."""
    return sum(log_factorial(beta + 2 * m + j - 1) - log_factorial(beta + 2 * m + 2 * j)
               for j in range(alpha))


def _log_ratio_t(t):
    # ln(t / (1 + t)) without cancellation for large t
    return -math.log1p(1.0 / t)


def _log_phi(i, alpha, beta, m, t, omega):
    if not 1 <= i <= alpha + 1:
        raise DimensionError(f"phi index i={i} outside 1..{alpha + 1}")
    top = alpha + 1 - i
    big = alpha + beta + 2 * m + i - 2
    x = omega * t / (1.0 + t) if math.isfinite(t) else omega
    logx = math.log(x) if x > 0 else -math.inf
    logs = []
    for k in range(top + 1):
        power = alpha - k
        if power == 0:
            lp = 0.0  # 0^0 = 1 when omega = 0
        elif x == 0:
            continue
        else:
            lp = power * logx
        coeff = (log_factorial(top) + log_factorial(big) - log_factorial(k)
                 - log_factorial(top - k) - log_factorial(big - k))
        logs.append(coeff + lp)
    if not logs:
        return -math.inf, 0
    hi = max(logs)
    return hi + math.log(sum(math.exp(v - hi) for v in logs)), 1


def phi(i, dims, t, omega):
    """First-column entry Phi_i^{(alpha)}(t, omega) of the exact-CDF determinant."""
    _check_omega(omega)
    lg, s = _log_phi(i, dims.alpha, dims.beta, dims.m, t, omega)
    return s * math.exp(lg) if s else 0.0


def _log_psi(i, j, beta, m, t):
    degree = m + i - j
    if degree < 0:
        # derivative of order j-2 beyond the polynomial degree
        return -math.inf, 0
    lp, _ = log_pochhammer(beta + m + i - 1, j - 2)
    x = 2.0 / t + 1.0
    mant, log_scale = jacobi_eval_scaled(degree, j - 2, beta + j - 2, x)
    if mant <= 0:
        raise NumericRangeError(f"Jacobi value at x={x} is not positive ({mant})")
    return lp + log_scale + math.log(mant), 1


def psi(i, j, dims, t):
    """Entry Psi_{i,j}(t) = (beta+m+i-1)_{j-2} P^{(j-2, beta+j-2)}_{m+i-j}(2/t + 1).

    Entries whose Jacobi degree m+i-j is negative are zero.
    """
    if j < 2 or i < 1:
        raise DimensionError(f"psi indices need i >= 1, j >= 2, got ({i}, {j})")
    lg, s = _log_psi(i, j, dims.beta, dims.m, t)
    return s * math.exp(lg) if s else 0.0


def _phi_mp(ctx, i, alpha, beta, m, t, omega):
    top = alpha + 1 - i
    big = alpha + beta + 2 * m + i - 2
    t = ctx.mpf(t)
    x = ctx.mpf(omega) * t / (1 + t)
    total = ctx.mpf(0)
    for k in range(top + 1):
        power = alpha - k
        term = ctx.factorial(top) * ctx.factorial(big) / (
            ctx.factorial(k) * ctx.factorial(top - k) * ctx.factorial(big - k))
        total += term * (x ** power if power else 1)
    return total


def _psi_mp(ctx, i, j, beta, m, t):
    degree = m + i - j
    if degree < 0:
        return ctx.mpf(0)
    x = 2 / ctx.mpf(t) + 1
    return ctx.rf(beta + m + i - 1, j - 2) * jacobi_recurrence(degree, j - 2, beta + j - 2, x)


def _theorem_matrix(alpha, beta, m, t, first_column):
    size = alpha + 1
    logabs = np.full((size, size), -np.inf)
    sign = np.zeros((size, size))
    for i in range(1, size + 1):
        logabs[i - 1, 0], sign[i - 1, 0] = first_column(i)
        for j in range(2, size + 1):
            logabs[i - 1, j - 1], sign[i - 1, j - 1] = _log_psi(i, j, beta, m, t)
    return logabs, sign


def _finish(log_value, sign, what):
    if sign == 0 or log_value == -math.inf:
        return 0.0
    if not math.isfinite(log_value):
        raise NumericRangeError(f"{what}: non-finite log value {log_value}")
    value = sign * math.exp(min(log_value, 700.0))
    if not -_RANGE_SLACK <= value <= 1.0 + _RANGE_SLACK:
        raise NumericRangeError(
            f"{what}: value {value:.6g} is not a probability; determinant lost precision. "
            "For large dimensions use the high-dimensional approximations (--regime highdim).")
    return min(max(value, 0.0), 1.0)


def evaluate_cdf(dims, omega, t):
    """Exact CDF with diagnostics: returns a :class:`CdfEvaluation`."""
    _check_nonsingular(dims)
    _check_omega(omega)
    if t < 0 or math.isnan(t):
        raise ValueError(f"CDF argument must be non-negative, got {t}")
    if t == 0:
        return CdfEvaluation(0.0, 0.0, 0.0)
    if math.isinf(t):
        return CdfEvaluation(t, 1.0, 0.0)
    alpha, beta, m = dims.alpha, dims.beta, dims.m
    log_pref = (log_k_const(alpha, beta, m) - omega / (1.0 + t)
                + m * (alpha + beta + m) * _log_ratio_t(t))
    logabs, sign = _theorem_matrix(
        alpha, beta, m, t, lambda i: _log_phi(i, alpha, beta, m, t, omega))

    def build_mp(ctx):
        return ctx.matrix([[_phi_mp(ctx, i, alpha, beta, m, t, omega)]
                           + [_psi_mp(ctx, i, j, beta, m, t) for j in range(2, alpha + 2)]
                           for i in range(1, alpha + 2)])

    det_sign, log_det, scale = adaptive_logdet(logabs, sign, build_mp)
    value = _finish(log_pref + log_det, det_sign, f"cdf_lambda_max{(m, dims.n, dims.p)}")
    return CdfEvaluation(float(t), value, scale)


@_over_t
def cdf_lambda_max(dims, omega, t):
    """Pr{lambda_max(S^{-1/2} R S^{-1/2}) <= t} for n >= m, p >= m."""
    return evaluate_cdf(dims, omega, t).value


@_over_t
def cdf_alpha0(m, beta, omega, t):
    """Closed form for n = m: exp(-omega/(1+t)) (t/(1+t))^{m(beta+m)}."""
    _check_omega(omega)
    if t <= 0:
        if t < 0:
            raise ValueError(f"CDF argument must be non-negative, got {t}")
        return 0.0
    if math.isinf(t):
        return 1.0
    return math.exp(-omega / (1.0 + t) + m * (beta + m) * _log_ratio_t(t))


@_over_t
def cdf_central(dims, t):
    """omega = 0 form: C(alpha,beta,m) (t/(1+t))^{m(alpha+beta+m)} det[Psi_{i+1,j+1}(t)]_{alpha x alpha}."""
    _check_nonsingular(dims)
    if t < 0:
        raise ValueError(f"CDF argument must be non-negative, got {t}")
    if t == 0:
        return 0.0
    if math.isinf(t):
        return 1.0
    alpha, beta, m = dims.alpha, dims.beta, dims.m
    log_c = (log_factorial(alpha + beta + 2 * m - 1) - log_factorial(beta + 2 * m - 1)
             + log_k_const(alpha, beta, m))
    log_pref = log_c + m * (alpha + beta + m) * _log_ratio_t(t)
    logabs = np.full((alpha, alpha), -np.inf)
    sign = np.zeros((alpha, alpha))
    for i in range(1, alpha + 1):
        for j in range(1, alpha + 1):
            logabs[i - 1, j - 1], sign[i - 1, j - 1] = _log_psi(i + 1, j + 1, beta, m, t)

    def build_mp(ctx):
        return ctx.matrix([[_psi_mp(ctx, i + 1, j + 1, beta, m, t) for j in range(1, alpha + 1)]
                           for i in range(1, alpha + 1)])

    det_sign, log_det, _ = adaptive_logdet(logabs, sign, build_mp)
    return _finish(log_pref + log_det, det_sign, f"cdf_central{(m, dims.n, dims.p)}")


def relabel_singular(dims):
    """(m, n, p) -> (p, n + p - m, m); an involution."""
    return ModelDims(dims.p, dims.n + dims.p - dims.m, dims.m)


@_over_t
def cdf_singular(dims, omega, t):
    """Largest non-zero eigenvalue CDF for the singular case p < m."""
    if not dims.singular:
        raise DimensionError(f"cdf_singular needs p < m, got {dims}; use cdf_lambda_max")
    if dims.n < dims.m:
        raise DimensionError(f"need n >= m, got {dims}")
    return cdf_lambda_max(relabel_singular(dims), omega, t)


def cdf(dims, omega, t):
    """Dispatch to :func:`cdf_singular` or :func:`cdf_lambda_max` depending on p < m."""
    if dims.singular:
        return cdf_singular(dims, omega, t)
    return cdf_lambda_max(dims, omega, t)


def cdf_test_statistic(dims, omega, x):
    """CDF of lambda_hat_max = lambda_max(Sigma_hat^{-1} R_hat) = (n/p) lambda_max at x."""
    return cdf(dims, omega, np.multiply(dims.c, x) if np.ndim(x) else dims.c * x)


def quantile(dims, omega, q, scaled=False, tol=1e-9):
    """Solve cdf(t) = q for t (lambda scale) or x = t / c when ``scaled``."""
    if not 0.0 < q < 1.0:
        raise ValueError(f"quantile level must lie in (0, 1), got {q}")
    m, n, p = dims.m, dims.n, dims.p
    t0 = min(max(m * p / max(n - m + 1, 1), 1e-6), 1e6)

    def g(u):
        return cdf(dims, omega, math.exp(u)) - q

    lo = hi = math.log(t0)
    lo_lim, hi_lim = math.log(1e-12), math.log(1e12)
    while g(lo) > 0:
        lo -= math.log(2.0)
        if lo < lo_lim:
            raise NumericRangeError(f"quantile {q} not bracketed above t=1e-12 for {dims}")
    while g(hi) < 0:
        hi += math.log(2.0)
        if hi > hi_lim:
            raise NumericRangeError(f"quantile {q} not bracketed below t=1e12 for {dims}")
    if lo == hi:
        return math.exp(lo) / (dims.c if scaled else 1.0)
    u = brentq(g, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    if abs(g(u)) > tol:
        raise NumericRangeError(f"quantile {q} for {dims} converged to residual {g(u):.3g}")
    t = math.exp(u)
    return t / dims.c if scaled else t


def limiting_scaled_cdf(c1, x, tau=None, phi=None):
    """Limit of Pr{lambda_max / m^2 <= x} for m = n, m/p -> c1.

    Give exactly one of ``tau`` (omega/p -> tau) or ``phi`` (omega/p^2 -> phi).
    """
    if not 0 < c1 <= 1:
        raise ValueError(f"c1 must lie in (0, 1], got {c1}")
    if (tau is None) == (phi is None):
        raise ValueError("specify exactly one of tau or phi")
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        if tau is not None:
            if tau < 0:
                raise ValueError("tau must be non-negative")
            out = np.exp(-1.0 / (c1 * x))
        else:
            if phi < 0:
                raise ValueError("phi must be non-negative")
            out = np.exp(-(phi + c1) / (c1 * c1 * x))
    out = np.where(x > 0, out, 0.0)
    return float(out) if out.ndim == 0 else out
