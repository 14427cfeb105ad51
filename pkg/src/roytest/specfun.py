"""Scalar special functions: Pochhammer arithmetic, Jacobi polynomials,
the Gaussian tail function and the unitary Tracy-Widom law F2.

Pochhammer symbols and factorial ratios are carried as ``(log|value|, sign)``
pairs so the exact-CDF determinants survive parameters in the hundreds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq
from scipy.special import erfc, gammaln, gammasgn

__all__ = [
    "JacobiParams",
    "Tw2Table",
    "log_factorial",
    "log_pochhammer",
    "jacobi_eval",
    "jacobi_eval_scaled",
    "jacobi_recurrence",
    "jacobi_series",
    "jacobi_derivative",
    "gaussian_q",
    "tw2_table",
    "tw2_cdf",
    "tw2_quantile",
]

# Rescaling threshold for the scaled Jacobi recurrence.
_BIG = 1e150


def log_factorial(n):
    """ln(n!) for a non-negative integer."""
    if n < 0:
        raise ValueError(f"factorial of negative number {n}")
    return math.lgamma(n + 1.0)


def _is_nonpositive_integer(a):
    return a <= 0 and float(a).is_integer()


def log_pochhammer(a, k):
    """Return ``(log|(a)_k|, sign)`` for the rising factorial (a)_k.

    ``sign`` is +1, -1 or 0; a zero value (negative integer ``a`` with
    ``k > -a``) is reported as ``(-inf, 0)``.
    """
    if k < 0 or int(k) != k:
        raise ValueError(f"k must be a non-negative integer, got {k}")
    k = int(k)
    if k == 0:
        return 0.0, 1
    if _is_nonpositive_integer(a):
        n = int(-a)
        if k > n:
            return -math.inf, 0
        # (-n)_k = (-1)^k n! / (n-k)!
        return math.lgamma(n + 1.0) - math.lgamma(n - k + 1.0), (-1) ** k
    if a > 0:
        return math.lgamma(a + k) - math.lgamma(a), 1
    # a negative, non-integer: (a)_k = Gamma(a+k)/Gamma(a) with signs
    sign = int(gammasgn(a + k) * gammasgn(a))
    return float(gammaln(a + k) - gammaln(a)), sign


@dataclass(frozen=True)
class JacobiParams:
    """Degree and non-negative integer superscripts of P_n^{(a,b)}."""

    degree: int
    a: int = 0
    b: int = 0

    def __post_init__(self):
        for name in ("degree", "a", "b"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise ValueError(f"JacobiParams.{name} must be a non-negative integer, got {v}")


def _coerce(params, a, b):
    if isinstance(params, JacobiParams):
        return params.degree, params.a, params.b
    return int(params), a, b


def jacobi_eval_scaled(n, a, b, x):
    """Evaluate P_n^{(a,b)}(x) as ``(mantissa, log_scale)`` with value = mantissa * exp(log_scale).

    Three-term recurrence with periodic renormalisation, so degrees and
    arguments far outside [-1, 1] do not overflow.
    """
    if n < 0:
        return 0.0, 0.0
    p_prev = 1.0
    if n == 0:
        return p_prev, 0.0
    p_cur = (a + 1) + (a + b + 2) * (x - 1) / 2
    log_scale = 0.0
    for k in range(2, n + 1):
        s = 2 * k + a + b
        c1 = 2 * k * (k + a + b) * (s - 2)
        c2 = (s - 1) * (s * (s - 2) * x + a * a - b * b)
        c3 = 2 * (k + a - 1) * (k + b - 1) * s
        p_prev, p_cur = p_cur, (c2 * p_cur - c3 * p_prev) / c1
        mag = abs(p_cur)
        if mag > _BIG:
            p_prev /= mag
            p_cur /= mag
            log_scale += math.log(mag)
    return p_cur, log_scale


def jacobi_recurrence(n, a, b, x):
    """Unscaled three-term recurrence for any numeric type (used with mpmath numbers)."""
    if n < 0:
        return 0 * x
    p_prev = 1 + 0 * x
    if n == 0:
        return p_prev
    p_cur = (a + 1) + (a + b + 2) * (x - 1) / 2
    for k in range(2, n + 1):
        s = 2 * k + a + b
        c1 = 2 * k * (k + a + b) * (s - 2)
        c2 = (s - 1) * (s * (s - 2) * x + a * a - b * b)
        c3 = 2 * (k + a - 1) * (k + b - 1) * s
        p_prev, p_cur = p_cur, (c2 * p_cur - c3 * p_prev) / c1
    return p_cur


def jacobi_eval(params, x, a=0, b=0):
    """P_n^{(a,b)}(x) via the three-term recurrence.

    ``params`` is a :class:`JacobiParams` or the degree (then ``a``, ``b`` are used).
    """
    n, a, b = _coerce(params, a, b)
    mant, log_scale = jacobi_eval_scaled(n, a, b, float(x))
    return mant * math.exp(log_scale) if log_scale else mant


def jacobi_series(params, x, a=0, b=0):
    """P_n^{(a,b)}(x) from the terminating 2F1 sum (test oracle; cancels for large n)."""
    n, a, b = _coerce(params, a, b)
    y = (1.0 - x) / 2.0
    total = 0.0
    term = 1.0
    for k in range(n + 1):
        total += term
        # ratio of consecutive terms of (-n)_k (n+a+b+1)_k / (k! (a+1)_k) y^k
        term *= (k - n) * (n + a + b + 1 + k) / ((k + 1) * (a + 1 + k)) * y
    lp, _ = log_pochhammer(a + 1, n)
    return math.exp(lp - math.lgamma(n + 1.0)) * total


def jacobi_derivative(params, k, x, a=0, b=0):
    """k-th derivative: 2^{-k} (n+a+b+1)_k P_{n-k}^{(a+k,b+k)}(x); zero for k > n."""
    n, a, b = _coerce(params, a, b)
    if k < 0:
        raise ValueError("derivative order must be non-negative")
    if k > n:
        return 0.0
    if k == 0:
        return jacobi_eval(n, x, a, b)
    lp, _ = log_pochhammer(n + a + b + 1, k)
    mant, log_scale = jacobi_eval_scaled(n - k, a + k, b + k, float(x))
    return mant * math.exp(lp - k * math.log(2.0) + log_scale)


def gaussian_q(x):
    """Gaussian tail probability Q(x) = 1 - Phi(x)."""
    out = 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class Tw2Table:
    """Tabulated F2 on a uniform grid with a monotone (PCHIP) interpolant."""

    grid: np.ndarray
    cdf: np.ndarray
    version: int = 1
    _interp: PchipInterpolator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        cdf = np.asarray(self.cdf, dtype=float)
        if grid.ndim != 1 or grid.shape != cdf.shape or np.any(np.diff(grid) <= 0):
            raise ValueError("Tw2Table grid must be strictly increasing and match cdf")
        if np.any(np.diff(cdf) < 0):
            raise ValueError("Tw2Table cdf must be non-decreasing")
        if not (cdf[0] < 1e-8 and cdf[-1] > 1 - 1e-8):
            raise ValueError("Tw2Table does not cover both tails")
        grid.setflags(write=False)
        cdf.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "cdf", cdf)
        object.__setattr__(self, "_interp", PchipInterpolator(grid, cdf, extrapolate=False))

    @classmethod
    def from_csv(cls, path):
        if hasattr(path, "read_text"):
            return cls.from_text(path.read_text())
        with open(path) as fh:
            return cls.from_text(fh.read())

    @classmethod
    def from_text(cls, text):
        version = 1
        rows = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if "version" in line:
                    version = int(line.split("version", 1)[1].split(";")[0])
                continue
            if line.startswith("s,"):
                continue
            s, f = line.split(",")
            rows.append((float(s), float(f)))
        arr = np.array(rows)
        return cls(arr[:, 0], arr[:, 1], version)

    def cdf_at(self, s):
        s = np.asarray(s, dtype=float)
        out = self._interp(np.clip(s, self.grid[0], self.grid[-1]))
        out = np.where(s < self.grid[0], 0.0, out)
        out = np.where(s > self.grid[-1], 1.0, out)
        out = np.clip(out, 0.0, 1.0)
        return float(out) if out.ndim == 0 else out

    def density(self, s):
        d = self._interp.derivative()(np.asarray(s, dtype=float))
        return np.nan_to_num(d)

    def quantile(self, q):
        if not 0.0 < q < 1.0:
            raise ValueError(f"quantile level must lie in (0, 1), got {q}")
        i = int(np.searchsorted(self.cdf, q))
        if i <= 0:
            return float(self.grid[0])
        if i >= len(self.grid):
            return float(self.grid[-1])
        lo, hi = self.grid[i - 1], self.grid[i]
        if self.cdf[i] == q:
            return float(hi)
        return brentq(lambda s: float(self._interp(s)) - q, lo, hi, xtol=1e-14, rtol=1e-15)


@lru_cache(maxsize=1)
def tw2_table():
    """The packaged F2 table (loaded once, immutable)."""
    return Tw2Table.from_csv(resources.files("roytest") / "data" / "tw2_table.csv")


def tw2_cdf(s):
    """Unitary Tracy-Widom CDF F2(s); exact 0/1 outside the tabulated range [-10, 6]."""
    return tw2_table().cdf_at(s)


def tw2_quantile(q):
    """Inverse of :func:`tw2_cdf` for q in (0, 1)."""
    return tw2_table().quantile(q)
