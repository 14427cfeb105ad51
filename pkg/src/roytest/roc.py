"""False-alarm / detection probabilities and ROC curves of the largest-root test.

The test rejects H0 when lambda_hat_max > xi_th. Under H0 the law of
lambda_hat_max does not depend on the noise covariance (CFAR), so the
threshold for a target false-alarm rate comes from the central CDF alone.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import expit, logit

from .exactcdf import ModelDims, cdf_test_statistic, quantile

__all__ = [
    "RocPoint",
    "RocCurve",
    "ScalingLaw",
    "logit_grid",
    "pf_pd_at_threshold",
    "roc_curve",
    "roc_alpha0_closed",
    "limiting_roc_fixed_m",
    "limiting_roc_highdim",
    "roc_power_bounds",
    "pd_exact_alpha0",
]

DEFAULT_GRID_SIZE = 199


@dataclass(frozen=True)
class RocPoint:
    pf: float
    pd: float
    threshold: float


@dataclass
class RocCurve:
    """Ordered (pf, pd) pairs with the lambda_hat thresholds that generated them."""

    points: list
    dims: ModelDims | None = None
    omega: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        pf = [pt.pf for pt in self.points]
        if any(b <= a for a, b in zip(pf, pf[1:])):
            raise ValueError("RocCurve points must have strictly increasing pf")

    @property
    def pf(self):
        return np.array([pt.pf for pt in self.points])

    @property
    def pd(self):
        return np.array([pt.pd for pt in self.points])

    @property
    def thresholds(self):
        return np.array([pt.threshold for pt in self.points])

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["pf", "pd", "threshold"])
        for pt in self.points:
            writer.writerow([format(float(v), ".17g") for v in (pt.pf, pt.pd, pt.threshold)])
        return buf.getvalue()

    def to_json(self):
        doc = {
            "dims": asdict(self.dims) if self.dims is not None else None,
            "omega": self.omega,
            "meta": self.meta,
            "points": [asdict(pt) for pt in self.points],
        }
        return json.dumps(doc, indent=2)

    @classmethod
    def from_csv(cls, text, dims=None, omega=0.0):
        rows = list(csv.DictReader(io.StringIO(text)))
        pts = [RocPoint(float(r["pf"]), float(r["pd"]), float(r["threshold"])) for r in rows]
        return cls(pts, dims, omega)


@dataclass(frozen=True)
class ScalingLaw:
    """Signal energy growth ||s||^2 = k * p**epsilon."""

    k: float
    epsilon: float

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError(f"ScalingLaw.k must be positive, got {self.k}")
        if not self.epsilon >= 0:
            raise ValueError(f"ScalingLaw.epsilon must be non-negative, got {self.epsilon}")


def logit_grid(count=DEFAULT_GRID_SIZE, lo=1e-4, hi=1 - 1e-4):
    """False-alarm grid evenly spaced in logit(pf)."""
    return expit(np.linspace(logit(lo), logit(hi), count))


def _check_pf(pf, closed=True):
    ok = 0.0 <= pf <= 1.0 if closed else 0.0 < pf < 1.0
    if not ok:
        raise ValueError(f"false-alarm probability out of range: {pf}")


def pf_pd_at_threshold(dims, omega, xi_th):
    """(P_F, P_D) of the test lambda_hat_max > xi_th."""
    if not xi_th > 0:
        raise ValueError(f"threshold must be positive, got {xi_th}")
    pf = 1.0 - cdf_test_statistic(dims, 0.0, xi_th)
    pd = pf if omega == 0 else 1.0 - cdf_test_statistic(dims, omega, xi_th)
    return pf, pd


def roc_curve(dims, omega, pf_grid=None):
    """Exact ROC: thresholds from the H0 quantile at 1 - pf, P_D from the non-central CDF."""
    if pf_grid is None:
        pf_grid = logit_grid()
    points = []
    for pf in pf_grid:
        pf = float(pf)
        _check_pf(pf, closed=False)
        thr = quantile(dims, 0.0, 1.0 - pf, scaled=True)
        # identical laws under omega = 0: report the diagonal exactly
        pd = pf if omega == 0 else 1.0 - cdf_test_statistic(dims, omega, thr)
        points.append(RocPoint(pf, pd, thr))
    return RocCurve(points, dims, float(omega))


def roc_alpha0_closed(m, beta, omega, pf):
    """Closed-form ROC for n = m: 1 - (1-pf) exp(-omega (1 - (1-pf)^{1/(m(beta+m))}))."""
    pf = np.asarray(pf, dtype=float)
    if np.any((pf < 0) | (pf > 1)):
        raise ValueError("false-alarm probability out of range")
    q = 1.0 - pf
    # 1 - q**e computed as -expm1(e*log q); q = 0 gives 1
    with np.errstate(divide="ignore"):
        gap = np.where(q > 0, -np.expm1(np.log(np.where(q > 0, q, 1.0)) / (m * (beta + m))), 1.0)
    pd = 1.0 - q * np.exp(-omega * gap)
    pd = np.where(omega == 0, pf, pd)
    pd = np.where(pf == 0, 0.0, np.where(pf == 1, 1.0, pd))
    return float(pd) if pd.ndim == 0 else pd


def _power_form(pf, exponent):
    pf = np.asarray(pf, dtype=float)
    out = 1.0 - (1.0 - pf) ** exponent
    return float(out) if out.ndim == 0 else out


def limiting_roc_fixed_m(m, law, gamma_quad, pf):
    """p -> infinity limit of the n = m ROC with ||s||^2 = k p^epsilon.

    ``gamma_quad`` is k * a^H Sigma^{-1} a.
    """
    _check_pf(pf)
    if law.epsilon < 1:
        return float(pf)
    if law.epsilon == 1:
        return _power_form(pf, 1.0 + gamma_quad / m)
    return 1.0 if pf > 0 else 0.0


def limiting_roc_highdim(c1, law, gamma_quad, pf):
    """Limit of the n = m ROC as m, p -> infinity with m/p -> c1."""
    _check_pf(pf)
    if not 0 < c1 < 1:
        raise ValueError(f"c1 must lie in (0, 1), got {c1}")
    if law.epsilon < 2:
        return float(pf)
    if law.epsilon == 2:
        return _power_form(pf, 1.0 + gamma_quad / c1)
    return 1.0 if pf > 0 else 0.0


def roc_power_bounds(pf, k, m_or_c1, sigma_norm, sigma_inv_norm):
    """Bounds on the limiting power from the spectral norms of Sigma and Sigma^{-1}.

    Returns ``(lower, upper)`` with exponents 1 + k/(m ||Sigma||) and
    1 + k ||Sigma^{-1}|| / m (pass c1 in place of m for the high-dimensional case).
    """
    _check_pf(pf)
    if not (k > 0 and m_or_c1 > 0 and sigma_norm > 0 and sigma_inv_norm > 0):
        raise ValueError("k, m_or_c1 and both norms must be positive")
    if sigma_inv_norm * sigma_norm < 1 - 1e-12:
        raise ValueError("inconsistent norms: ||Sigma^-1|| must be >= 1/||Sigma||")
    lower = _power_form(pf, 1.0 + k / (m_or_c1 * sigma_norm))
    upper = _power_form(pf, 1.0 + k * sigma_inv_norm / m_or_c1)
    return lower, upper


def pd_exact_alpha0(m, p, law, gamma_quad, pf):
    """n = m power at finite p for ||s||^2 = k p^epsilon, via the closed form."""
    omega = gamma_quad * p ** law.epsilon
    return roc_alpha0_closed(m, p - m, omega, pf)

