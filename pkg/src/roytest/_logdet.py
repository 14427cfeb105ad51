"""Determinants of matrices whose entries are given as (log|x|, sign) pairs,
with an arbitrary-precision fallback for ill-conditioned cases."""
import math

import mpmath
import numpy as np

# Above this condition number the float determinant is recomputed with mpmath.
COND_LIMIT = 1e4
# Digits that must survive cancellation, and the working-precision ceiling.
SAFE_DIGITS = 20
MAX_DIGITS = 4000


def signed_logdet(logabs, sign):
    """Return ``(sign, log|det|, log_scale, cond)`` for entries ``sign * exp(logabs)``.

    Each row, then each column, is divided by its largest entry before an LU factorisation
    (``numpy.linalg.slogdet``); the removed scales are added back in the
    log domain. Zero entries must carry sign 0 (their ``logabs`` is ignored).
    """
    logabs = np.asarray(logabs, dtype=float)
    sign = np.asarray(sign, dtype=float)
    n = logabs.shape[0]
    if n == 0:
        return 1.0, 0.0, 0.0, 1.0
    masked = np.where(sign != 0, logabs, -np.inf)
    row_max = masked.max(axis=1)
    if not np.all(np.isfinite(row_max)):
        return 0.0, -np.inf, 0.0, np.inf
    scaled = masked - row_max[:, None]
    col_max = scaled.max(axis=0)
    if not np.all(np.isfinite(col_max)):
        return 0.0, -np.inf, 0.0, np.inf
    scaled = sign * np.exp(scaled - col_max[None, :])
    s, ld = np.linalg.slogdet(scaled)
    scale = float(row_max.sum() + col_max.sum())
    cond = float(np.linalg.cond(scaled)) if s != 0 else np.inf
    return float(s), float(ld) + scale, scale, cond


def _digits_lost(ctx, mat, det):
    """log10 of the Hadamard bound over |det|: the digits cancelled in det."""
    if det == 0:
        return math.inf
    bound = ctx.mpf(0)
    for i in range(mat.rows):
        row = ctx.sqrt(ctx.fsum(abs(mat[i, j]) ** 2 for j in range(mat.cols)))
        if row == 0:
            return math.inf
        bound += ctx.log10(row)
    return float(bound - ctx.log10(abs(det)))


def adaptive_logdet(logabs, sign, build_mp):
    """Signed log-determinant, refined in extended precision when needed.

    ``build_mp(ctx)`` must return the same matrix as an ``ctx.matrix`` of
    mpf entries; it is only called when the float condition number exceeds
    :data:`COND_LIMIT`. The working precision is raised until at least
    :data:`SAFE_DIGITS` digits survive the cancellation in the determinant.
    Returns ``(sign, log|det|, log_scale)``.
    """
    s, ld, scale, cond = signed_logdet(logabs, sign)
    if cond <= COND_LIMIT:
        return s, ld, scale
    ctx = mpmath.MPContext()
    digits = int(24 + (math.log10(cond) if math.isfinite(cond) else 40.0))
    while True:
        ctx.dps = digits
        mat = build_mp(ctx)
        det = ctx.det(mat)
        lost = _digits_lost(ctx, mat, det)
        if digits - lost >= SAFE_DIGITS:
            break
        if digits >= MAX_DIGITS:
            if det == 0:
                return 0.0, -np.inf, scale
            raise ArithmeticError(
                f"determinant cancels more than {MAX_DIGITS - SAFE_DIGITS} digits")
        digits = int(min(MAX_DIGITS, max(2 * digits, lost + SAFE_DIGITS + 10)))
    return (1.0 if det > 0 else -1.0), float(ctx.log(abs(det))), scale
