"""High-dimensional laws of lambda_hat_max as m, n, p -> infinity with
m/p -> c1 and m/n -> c2 (both in (0, 1)), SNR gamma = omega / p.

Below the critical SNR gamma_p the largest root sticks to the bulk edge mu
with Tracy-Widom fluctuations of order m^{-2/3}; above it the root separates
to xi > mu with Gaussian fluctuations of order m^{-1/2}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import RegimeError
from .specfun import gaussian_q, tw2_cdf, tw2_quantile

__all__ = [
    "SpectrumParams",
    "EdgeConstants",
    "SpikeConstants",
    "edge_constants",
    "spike_constants",
    "supercritical",
    "null_cdf_approx",
    "alt_cdf_approx",
    "asympt_power",
    "asympt_roc",
    "centered_statistic",
    "uncentered_statistic",
]


@dataclass(frozen=True)
class SpectrumParams:
    c1: float
    c2: float
    gamma: float = 0.0

    def __post_init__(self):
        if self.c2 == 1:
            raise RegimeError(
                "c2 = 1 (m = n) has no Tracy-Widom/Gaussian law here; use "
                "exactcdf.limiting_scaled_cdf or roc.limiting_roc_highdim")
        for name in ("c1", "c2"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")
        if not self.gamma >= 0:
            raise ValueError(f"gamma must be non-negative, got {self.gamma}")

    @classmethod
    def from_dims(cls, m, n, p, omega=0.0):
        """Plug-in ratios c1 = m/p, c2 = m/n and gamma = omega/p."""
        return cls(m / p, m / n, omega / p)


@dataclass(frozen=True)
class EdgeConstants:
    r: float
    mu: float
    sigma0: float
    gamma_p: float


@dataclass(frozen=True)
class SpikeConstants:
    xi: float
    sigma1: float
    tsq: float


def edge_constants(params):
    c1, c2 = params.c1, params.c2
    r = math.sqrt(c1 + c2 - c1 * c2)
    mu = ((1 + r) / (1 - c2)) ** 2
    denom = r * ((c1 + c2) ** 2 - c2 * (c1 + r) ** 2) ** 4
    sigma0_cubed = c1 ** 4 * (c1 + r) ** 4 * (c1 + c2) ** 4 / denom
    if not sigma0_cubed > 0:
        raise ValueError(f"sigma0^3 = {sigma0_cubed} is not positive for {params}")
    sigma0 = math.exp(math.log(sigma0_cubed) / 3.0)
    gamma_p = (c2 + r) / (1 - c2)
    return EdgeConstants(r, mu, sigma0, gamma_p)


def supercritical(params):
    """True above the critical SNR; raises at the critical point itself."""
    gp = edge_constants(params).gamma_p
    if params.gamma == gp:
        raise RegimeError(f"gamma = gamma_p = {gp}: no limiting law at the critical point")
    return params.gamma > gp


def spike_constants(params):
    if not supercritical(params):
        raise RegimeError(
            f"gamma = {params.gamma} is below gamma_p = {edge_constants(params).gamma_p}; "
            "the largest root follows the Tracy-Widom edge law (null_cdf_approx)")
    c1, c2, g = params.c1, params.c2, params.gamma
    xi = (g + c1) * (1 + g) / (g - (1 + g) * c2)
    tsq = c1 + c2 - c1 * (g * g - c1) / (1 + g) ** 2
    var = tsq * g * g * (1 + g) ** 2 * (g * g - c2 * (1 + g) ** 2 - c1) / (c2 - g + c2 * g) ** 4
    if not var > 0:
        raise RegimeError(f"non-positive spike variance {var} for {params}")
    mu = edge_constants(params).mu
    if not xi > mu:
        raise RegimeError(f"spike location {xi} does not exceed the bulk edge {mu}")
    return SpikeConstants(xi, math.sqrt(var), tsq)


def centered_statistic(params, m, lambda_hat):
    """t = m^{2/3} (lambda_hat - mu) / sigma0."""
    e = edge_constants(params)
    return m ** (2.0 / 3.0) * (np.asarray(lambda_hat, dtype=float) - e.mu) / e.sigma0


def uncentered_statistic(params, m, t):
    """Inverse of :func:`centered_statistic`."""
    e = edge_constants(params)
    return e.mu + e.sigma0 * np.asarray(t, dtype=float) / m ** (2.0 / 3.0)


def null_cdf_approx(params, m, x):
    """Pr{lambda_hat_max <= x | H0} ~ F2((x - mu) m^{2/3} / sigma0)."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    return tw2_cdf(centered_statistic(params, m, x))


def alt_cdf_approx(params, m, x):
    """H1 approximation: Gaussian about xi above gamma_p, the null law below it."""
    if not supercritical(params):
        return null_cdf_approx(params, m, x)
    s = spike_constants(params)
    z = (np.asarray(x, dtype=float) - s.xi) * math.sqrt(m) / s.sigma1
    return 1.0 - gaussian_q(z)


def asympt_power(params, m, pf):
    """Q((sigma0 F2^{-1}(1-pf) - m^{2/3}(xi - mu)) / (m^{1/6} sigma1)); pf when subcritical."""
    if not 0 < pf < 1:
        raise ValueError(f"false-alarm probability must lie in (0, 1), got {pf}")
    if not supercritical(params):
        return float(pf)
    e = edge_constants(params)
    s = spike_constants(params)
    t_th = tw2_quantile(1.0 - pf)
    arg = (e.sigma0 * t_th - m ** (2.0 / 3.0) * (s.xi - e.mu)) / (m ** (1.0 / 6.0) * s.sigma1)
    return gaussian_q(arg)


def asympt_roc(params, m, pf_grid):
    return np.array([asympt_power(params, m, float(pf)) for pf in pf_grid])
