"""Exact-covariance Gaussian path generation for fBm/mBm and analytic covariance oracles.

Paths are sampled on the grid t_i = i*delta_t, i = 1..n (the process is
degenerate at t = 0), by factorizing the population covariance matrix and
pushing a seeded standard-normal vector through the factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as _gamma_vec

from .hurst import HurstFunction

_JITTERS = (0.0, 1e-14, 1e-13, 1e-12, 1e-11, 1e-10, 1e-9, 1e-8)


class FactorizationError(np.linalg.LinAlgError):
    """Covariance factorization failed even after maximum diagonal jitter."""


@dataclass(frozen=True)
class SamplePath:
    """A discretely observed path: values[i] is the process at (i+1)*delta_t + start_time."""

    id: str
    values: np.ndarray
    delta_t: float = 1.0
    start_time: float = 0.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or values.size < 2:
            raise ValueError("a sample path needs at least 2 values")
        if not np.all(np.isfinite(values)):
            raise ValueError("sample path values must be finite")
        if self.delta_t <= 0:
            raise ValueError("delta_t must be positive")

    def __len__(self) -> int:
        return self.values.size

    def time_of(self, i: int) -> float:
        """Time of the i-th sample, 1-based."""
        return self.start_time + i * self.delta_t

    def prefix(self, n: int) -> "SamplePath":
        """The path truncated to its first n values."""
        return SamplePath(self.id, self.values[:n], self.delta_t, self.start_time)


def d_factor(t: float, s: float) -> float:
    """Amplitude coupling between two Hurst levels in the mBm covariance kernel.

    sqrt(G(2t+1) G(2s+1) sin(pi t) sin(pi s)) / (2 G(t+s+1) sin(pi (t+s)/2)),
    for t, s in (0, 1). Equals 1/2 whenever t == s.
    """
    if not (0.0 < t < 1.0 and 0.0 < s < 1.0):
        raise ValueError(f"Hurst arguments must lie in (0, 1), got ({t}, {s})")
    num = math.sqrt(
        math.gamma(2 * t + 1) * math.gamma(2 * s + 1) * math.sin(math.pi * t) * math.sin(math.pi * s)
    )
    den = 2 * math.gamma(t + s + 1) * math.sin(math.pi * (t + s) / 2)
    value = num / den
    if not math.isfinite(value):
        raise ValueError(f"non-finite coupling factor for Hurst pair ({t}, {s})")
    return value


def mbm_cov(f: HurstFunction, s: float, t: float) -> float:
    """Population covariance Cov(W(s), W(t)) of the mBm with Hurst function f."""
    hs, ht = f(s), f(t)
    a = hs + ht
    return d_factor(hs, ht) * (abs(t) ** a + abs(s) ** a - abs(t - s) ** a)


def _d_factor_matrix(h: np.ndarray) -> np.ndarray:
    """d_factor evaluated on every pair of entries of the Hurst vector h."""
    g = _gamma_vec(2.0 * h + 1.0) * np.sin(np.pi * h)
    num = np.sqrt(np.outer(g, g))
    a = h[:, None] + h[None, :]
    den = 2.0 * _gamma_vec(a + 1.0) * np.sin(np.pi * a / 2.0)
    out = num / den
    if not np.all(np.isfinite(out)):
        raise ValueError("non-finite coupling factor in covariance assembly")
    return out


def build_cov_matrix(f: HurstFunction, times) -> np.ndarray:
    """Population covariance matrix of the mBm on a strictly increasing time grid.

    Entry (i, j) equals mbm_cov(f, times[i], times[j]); the matrix is made
    exactly symmetric by mirroring the upper triangle.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 1:
        raise ValueError("times must be a non-empty 1-d grid")
    if times.size > 1 and not np.all(np.diff(times) > 0):
        raise ValueError("times must be strictly increasing")
    h = f.values_on(times)
    a = h[:, None] + h[None, :]
    tt = np.abs(times)
    cov = _d_factor_matrix(h) * (
        tt[None, :] ** a + tt[:, None] ** a - np.abs(times[None, :] - times[:, None]) ** a
    )
    return np.triu(cov) + np.triu(cov, 1).T


def fbm_increment_cov(h: float, var1: float, i: int, j: int, delta: float) -> float:
    """Autocovariance of unit-lag fBm increments at sampling indexes i and j.

    Depends on (i, j) only through |i - j|; var1 is the variance of the
    process at time 1.
    """
    k = i - j
    return (
        var1
        * delta ** (2 * h)
        / 2.0
        * (abs(k - 1) ** (2 * h) + abs(k + 1) ** (2 * h) - 2 * abs(k) ** (2 * h))
    )


def fbm_increment_cov_matrix(h: float, var1: float, m: int, delta: float = 1.0) -> np.ndarray:
    """m x m population covariance of consecutive fBm increments (Toeplitz)."""
    lags = np.abs(np.arange(m)[:, None] - np.arange(m)[None, :]).astype(float)
    row = (
        var1
        * delta ** (2 * h)
        / 2.0
        * (np.abs(lags - 1) ** (2 * h) + np.abs(lags + 1) ** (2 * h) - 2 * lags ** (2 * h))
    )
    return row


def cholesky_with_jitter(cov: np.ndarray) -> np.ndarray:
    """Lower-triangular factor of a symmetric PSD matrix, with escalating jitter.

    Additive diagonal jitter escalates 1e-14 -> 1e-8 before giving up.
    """
    eye = np.eye(cov.shape[0])
    for jitter in _JITTERS:
        try:
            return np.linalg.cholesky(cov + jitter * eye)
        except np.linalg.LinAlgError:
            continue
    raise FactorizationError(
        "covariance factorization failed after maximum jitter 1e-8; "
        "the kernel is numerically degenerate"
    )


# Factor caches keyed by the full generation configuration; safe because
# HurstFunction is frozen/hashable and factors are read-only after insertion.
_MBM_FACTORS: dict = {}
_FGN_FACTORS: dict = {}


def _mbm_factor(f: HurstFunction, n: int, delta_t: float) -> np.ndarray:
    key = (f, n, delta_t)
    factor = _MBM_FACTORS.get(key)
    if factor is None:
        times = delta_t * np.arange(1, n + 1)
        factor = cholesky_with_jitter(build_cov_matrix(f, times))
        _MBM_FACTORS[key] = factor
    return factor


def sample_path(f: HurstFunction, n: int, delta_t: float, seed, id: str | None = None) -> SamplePath:
    """Draw one zero-mean Gaussian path with the exact mBm covariance.

    Deterministic given the seed; seeds may be integers or int sequences so
    that per-path streams can be derived from (experiment seed, path index)
    and generated in any order.
    """
    if n < 2:
        raise ValueError("need n >= 2 samples")
    if delta_t <= 0:
        raise ValueError("delta_t must be positive")
    factor = _mbm_factor(f, n, delta_t)
    noise = np.random.default_rng(seed).standard_normal(n)
    values = factor @ noise
    if id is None:
        id = f"{f.kind}-{seed}"
    return SamplePath(id=id, values=values, delta_t=delta_t)


def sample_fbm_increments(h: float, n: int, delta: float, seed) -> np.ndarray:
    """Draw n consecutive fBm increments (fractional Gaussian noise), seeded."""
    key = (h, n, delta)
    factor = _FGN_FACTORS.get(key)
    if factor is None:
        factor = cholesky_with_jitter(fbm_increment_cov_matrix(h, 1.0, n, delta))
        _FGN_FACTORS[key] = factor
    noise = np.random.default_rng(seed).standard_normal(n)
    return factor @ noise
