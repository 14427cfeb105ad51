"""Seeded Monte Carlo sampler of the detection model.

Signal samples x_i = a s_i [H1] + Sigma^{1/2} g_i (i = 1..p) and noise-only
samples z_l = Sigma^{1/2} h_l (l = 1..n) with standard complex Gaussian
g, h. The statistic is the largest eigenvalue of Sigma_hat^{-1} R_hat with
R_hat = (1/p) sum x x^H and Sigma_hat = (1/n) sum z z^H, obtained from a
Cholesky factor of Sigma_hat and a Hermitian eigensolver (Sigma_hat is never
inverted explicitly).

Trials are grouped in fixed-size blocks. Block b draws from
``Philox(seed).jumped(b)``, so the output is the same for any worker count.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DimensionError
from .exactcdf import ModelDims
from .roc import RocCurve, RocPoint

__all__ = [
    "SignalModel",
    "EmpiricalCdf",
    "THREADS_ENV",
    "block_size",
    "sample_lambda_max",
    "simulate",
    "empirical_cdf",
    "empirical_roc",
    "roc_from_samples",
    "dkw_halfwidth",
    "samples_to_csv",
]

THREADS_ENV = "ROYTEST_THREADS"
MIN_TRIALS = 100
# complex entries drawn per block, bounds the memory of one batch
_BLOCK_BUDGET = 1 << 21
_MAX_BLOCK = 1024


def _decode(value):
    # JSON has no complex type: {"re": [...], "im": [...]} or a plain real list
    if isinstance(value, dict):
        return np.asarray(value["re"], dtype=float) + 1j * np.asarray(value.get("im", 0.0), dtype=float)
    return np.asarray(value, dtype=complex)


def _encode(arr):
    arr = np.asarray(arr)
    return {"re": arr.real.tolist(), "im": arr.imag.tolist()}


@dataclass(frozen=True, eq=False)
class SignalModel:
    m: int
    n: int
    p: int
    sigma: np.ndarray
    a_vec: np.ndarray
    s_vec: np.ndarray

    def __post_init__(self):
        ModelDims(self.m, self.n, self.p)
        if self.n < self.m:
            raise DimensionError(
                f"n={self.n} < m={self.m}: the noise sample covariance is singular")
        sigma = np.asarray(self.sigma, dtype=complex)
        a_vec = np.asarray(self.a_vec, dtype=complex).reshape(-1)
        s_vec = np.asarray(self.s_vec, dtype=complex).reshape(-1)
        if sigma.shape != (self.m, self.m):
            raise DimensionError(f"sigma must be {self.m}x{self.m}, got {sigma.shape}")
        if a_vec.shape != (self.m,):
            raise DimensionError(f"a_vec must have length m={self.m}, got {a_vec.shape}")
        if s_vec.shape != (self.p,):
            raise DimensionError(f"s_vec must have length p={self.p}, got {s_vec.shape}")
        if not np.allclose(sigma, sigma.conj().T, rtol=1e-12, atol=1e-12 * np.abs(sigma).max()):
            raise ValueError("sigma must be Hermitian")
        try:
            chol = np.linalg.cholesky(sigma)
        except np.linalg.LinAlgError as exc:
            raise ValueError("sigma is not positive definite (Cholesky failed)") from exc
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "a_vec", a_vec)
        object.__setattr__(self, "s_vec", s_vec)
        object.__setattr__(self, "_chol", chol)

    @property
    def dims(self):
        return ModelDims(self.m, self.n, self.p)

    @property
    def whitened_steering(self):
        """L^{-1} a for the Cholesky factor L of sigma."""
        return np.linalg.solve(self._chol, self.a_vec)

    @property
    def omega(self):
        """||s||^2 a^H Sigma^{-1} a, the trace of the non-centrality matrix."""
        w = self.whitened_steering
        return float(np.vdot(self.s_vec, self.s_vec).real * np.vdot(w, w).real)

    @classmethod
    def from_omega(cls, m, n, p, omega, sigma=None):
        """Model with the requested spike: a = L e_1 so that a^H Sigma^{-1} a = 1,
        and a flat signal with ||s||^2 = omega."""
        if not omega >= 0:
            raise ValueError(f"omega must be non-negative, got {omega}")
        sigma = np.eye(m, dtype=complex) if sigma is None else np.asarray(sigma, dtype=complex)
        chol = np.linalg.cholesky(sigma)
        a_vec = chol[:, 0].copy()
        s_vec = np.full(p, math.sqrt(omega / p), dtype=complex)
        return cls(m, n, p, sigma, a_vec, s_vec)

    @classmethod
    def from_config(cls, doc):
        """Build from a dict or JSON string with dims and either omega or (a, s, sigma)."""
        if isinstance(doc, str):
            doc = json.loads(doc)
        m, n, p = int(doc["m"]), int(doc["n"]), int(doc["p"])
        sigma = _decode(doc["sigma"]) if "sigma" in doc else None
        if "omega" in doc:
            if "a" in doc or "s" in doc:
                raise ValueError("give either omega or (a, s), not both")
            return cls.from_omega(m, n, p, float(doc["omega"]), sigma)
        if sigma is None:
            sigma = np.eye(m, dtype=complex)
        return cls(m, n, p, sigma, _decode(doc["a"]), _decode(doc["s"]))

    def to_config(self):
        return {"m": self.m, "n": self.n, "p": self.p, "sigma": _encode(self.sigma),
                "a": _encode(self.a_vec), "s": _encode(self.s_vec)}


def _complex_normal(rng, shape):
    # unit complex variance: 1/2 per real component
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * math.sqrt(0.5)


def _largest_eig(mat):
    return np.linalg.eigvalsh(mat)[..., -1]


def _direct_batch(model, h1, rng, count):
    m, n, p = model.m, model.n, model.p
    chol = model._chol
    g = _complex_normal(rng, (count, m, p))
    h = _complex_normal(rng, (count, m, n))
    x = chol @ g
    if h1:
        x = x + np.outer(model.a_vec, model.s_vec)
    z = chol @ h
    s_hat = z @ np.conj(np.swapaxes(z, -1, -2))
    c = np.linalg.cholesky(s_hat)
    w = np.linalg.solve(c, x)
    wh = np.conj(np.swapaxes(w, -1, -2))
    gram = w @ wh if p >= m else wh @ w
    return (n / p) * _largest_eig(gram)


def _bartlett(rng, count, m, dof):
    """Lower-triangular T with T T^H ~ CW_m(dof, I)."""
    t = np.zeros((count, m, m), dtype=complex)
    rows, cols = np.tril_indices(m, -1)
    t[:, rows, cols] = _complex_normal(rng, (count, len(rows)))
    idx = np.arange(m)
    t[:, idx, idx] = np.sqrt(rng.standard_gamma(dof - idx, size=(count, m)))
    return t


def _lower_solve(tri, rhs):
    # a LAPACK triangular solve per trial beats a batched LU once m is moderate
    if tri.shape[-1] < 32:
        return np.linalg.solve(tri, rhs)
    return np.stack([solve_triangular(a, b, lower=True, check_finite=False)
                     for a, b in zip(tri, rhs)])


def _bartlett_batch(model, h1, rng, count):
    """Same law as the direct sampler.

    Rotating the p signal columns so that s lies along the first axis and
    whitening by the Cholesky factor of sigma leaves
    R ~ v v^H + W_{p-1}, with v = ||s|| L^{-1} a [H1] + g, and S ~ W_n; the
    Wishart factors are drawn by the Bartlett decomposition.
    """
    m, n, p = model.m, model.n, model.p
    t_noise = _bartlett(rng, count, m, n)
    v = _complex_normal(rng, (count, m, 1))
    if h1:
        shift = model.whitened_steering * math.sqrt(np.vdot(model.s_vec, model.s_vec).real)
        v = v + shift[None, :, None]
    if p - 1 >= m:
        rest = _bartlett(rng, count, m, p - 1)
    else:
        rest = _complex_normal(rng, (count, m, p - 1))
    cols = np.concatenate([v, rest], axis=2)
    w = _lower_solve(t_noise, cols)
    wh = np.conj(np.swapaxes(w, -1, -2))
    gram = w @ wh if p >= m else wh @ w
    return (n / p) * _largest_eig(gram)


_METHODS = {"direct": _direct_batch, "bartlett": _bartlett_batch}


def block_size(model):
    """Trials per RNG block; depends on the dimensions only."""
    per_trial = model.m * (model.n + model.p)
    return int(max(1, min(_MAX_BLOCK, _BLOCK_BUDGET // per_trial)))


def _threads(workers):
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get(THREADS_ENV)
    return max(1, int(env)) if env else 1


def _check_hypothesis(hypothesis):
    if hypothesis not in ("H0", "H1"):
        raise ValueError(f"hypothesis must be 'H0' or 'H1', got {hypothesis!r}")
    return hypothesis == "H1"


def sample_lambda_max(model, hypothesis, rng, method="direct"):
    """One draw of lambda_hat_max using a caller-supplied numpy Generator."""
    h1 = _check_hypothesis(hypothesis)
    return float(_METHODS[method](model, h1, rng, 1)[0])


def simulate(model, hypothesis, trials, seed, method="direct", workers=None):
    """``trials`` draws of lambda_hat_max in block order (not sorted)."""
    h1 = _check_hypothesis(hypothesis)
    if method not in _METHODS:
        raise ValueError(f"unknown sampling method {method!r}; choose from {sorted(_METHODS)}")
    if trials < 1:
        raise ValueError("trials must be positive")
    size = block_size(model)
    nblocks = -(-trials // size)
    root = np.random.Philox(seed)
    sampler = _METHODS[method]

    def run(b):
        rng = np.random.Generator(root.jumped(b))
        return sampler(model, h1, rng, min(size, trials - b * size))

    nthreads = _threads(workers)
    if nthreads == 1:
        parts = [run(b) for b in range(nblocks)]
    else:
        with ThreadPoolExecutor(nthreads) as pool:
            parts = list(pool.map(run, range(nblocks)))
    return np.concatenate(parts)


def dkw_halfwidth(trials, delta=0.01):
    """sup |F_N - F| <= sqrt(ln(2/delta) / (2N)) with probability 1 - delta."""
    return math.sqrt(math.log(2.0 / delta) / (2.0 * trials))


@dataclass(frozen=True, eq=False)
class EmpiricalCdf:
    sorted_samples: np.ndarray
    seed: int
    trials: int
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        arr = np.asarray(self.sorted_samples, dtype=float)
        if arr.ndim != 1 or len(arr) != self.trials:
            raise ValueError("trials must equal the number of samples")
        if np.any(np.diff(arr) < 0):
            raise ValueError("samples must be sorted ascending")
        object.__setattr__(self, "sorted_samples", arr)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.searchsorted(self.sorted_samples, x, side="right") / self.trials
        return float(out) if out.ndim == 0 else out

    def quantile(self, q):
        """Smallest sample x with F_N(x) >= q."""
        q = np.asarray(q, dtype=float)
        k = np.clip(np.ceil(q * self.trials).astype(int) - 1, 0, self.trials - 1)
        out = self.sorted_samples[k]
        return float(out) if out.ndim == 0 else out

    def band(self, delta=0.01):
        return dkw_halfwidth(self.trials, delta)


def empirical_cdf(model, hypothesis, trials, seed, method="direct", workers=None):
    if trials < MIN_TRIALS:
        raise ValueError(f"trials={trials} < {MIN_TRIALS}: the DKW band would be meaningless")
    draws = simulate(model, hypothesis, trials, seed, method, workers)
    return EmpiricalCdf(np.sort(draws), seed, trials,
                        {"hypothesis": hypothesis, "method": method, "omega": model.omega})


def roc_from_samples(null, alt, pf_grid, dims=None, omega=0.0, meta=None):
    """Empirical ROC from an H0 and an H1 EmpiricalCdf."""
    points = []
    for pf in pf_grid:
        pf = float(pf)
        if not 0 < pf < 1:
            raise ValueError(f"false-alarm probability must lie in (0, 1), got {pf}")
        thr = null.quantile(1.0 - pf)
        points.append(RocPoint(pf, 1.0 - alt(thr), thr))
    return RocCurve(points, dims, omega, dict(meta or {}))


def empirical_roc(model, trials, pf_grid, seed, method="direct", workers=None):
    """Thresholds at H0 empirical quantiles, pd from H1 exceedances.

    H0 uses substream ``seed`` and H1 uses ``seed + 1``.
    """
    null = empirical_cdf(model, "H0", trials, seed, method, workers)
    alt = empirical_cdf(model, "H1", trials, seed + 1, method, workers)
    return roc_from_samples(null, alt, pf_grid, model.dims, model.omega,
                            {"source": "monte-carlo", "trials": trials, "seed": seed,
                             "method": method})


def samples_to_csv(ecdf):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["lambda_hat_max"])
    for v in ecdf.sorted_samples:
        writer.writerow([format(float(v), ".17g")])
    return buf.getvalue()
