"""Covariance-based dissimilarity measures between sampled process paths.

The empirical measure compares sliding-window empirical covariance matrices
of two increment series under the Frobenius norm, with summable weights over
window start and window size. The localized variant averages the measure over
windows of consecutive increments of the raw paths; the normalized variant
rescales each window by delta_t raised to the local Hurst value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .hurst import HurstFunction
from .processes import SamplePath, fbm_increment_cov_matrix


def default_weights(j):
    """Summable positive weights 1 / (j^2 (j+1)^2)."""
    j = np.asarray(j, dtype=float)
    return 1.0 / (j * j * (j + 1.0) * (j + 1.0))


def default_mn(n: int) -> int:
    """Largest covariance-matrix dimension: floor(ln n), clamped to [1, n]."""
    return min(max(int(math.floor(math.log(n))), 1), n)


@dataclass(frozen=True)
class DissimConfig:
    """Everything that pins down the empirical dissimilarity measures.

    K is the localized-window length in samples; None resolves to n_min - 2
    so that a single window spans the whole increment series. L is the number
    of averaged windows.
    """

    weight_rule: Callable = default_weights
    mn_rule: Callable = default_mn
    K: int | None = None
    L: int = 1
    use_log_star: bool = False

    def resolve_K(self, n_min: int) -> int:
        k = n_min - 2 if self.K is None else self.K
        if k < 1:
            raise ValueError(f"window length K={k} infeasible for paths of length {n_min}")
        return k

    def check_windows(self, n_min: int) -> int:
        k = self.resolve_K(n_min)
        if not (1 <= self.L <= n_min - k - 1):
            raise ValueError(
                f"window count L={self.L} infeasible: need 1 <= L <= {n_min - k - 1} "
                f"for paths of length {n_min} with K={k}"
            )
        return k


@dataclass
class OpCounter:
    """Instrumentation for the number of Frobenius-distance evaluations."""

    rho: int = 0


@dataclass(frozen=True)
class IncrementPath:
    """Consecutive differences of a sample path (one shorter than its parent)."""

    values: np.ndarray
    parent_id: str = ""
    delta_t: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))

    def __len__(self) -> int:
        return self.values.size


def increment_path(z: SamplePath) -> IncrementPath:
    """The full increment series of a sample path."""
    return IncrementPath(np.diff(z.values), parent_id=z.id, delta_t=z.delta_t)


def log_star(x):
    """Signed logarithm: ln x for x > 0, -ln(-x) for x < 0, and 0 at 0."""
    arr = np.asarray(x, dtype=float)
    out = np.zeros_like(arr)
    pos = arr > 0
    neg = arr < 0
    out[pos] = np.log(arr[pos])
    out[neg] = -np.log(-arr[neg])
    if np.isscalar(x) or arr.ndim == 0:
        return float(out)
    return out


def rho(m1: np.ndarray, m2: np.ndarray, use_log_star: bool = False,
        counter: OpCounter | None = None) -> float:
    """Frobenius norm of the difference of two equal-sized matrices."""
    m1 = np.asarray(m1, dtype=float)
    m2 = np.asarray(m2, dtype=float)
    if m1.shape != m2.shape:
        raise ValueError(f"matrix shapes differ: {m1.shape} vs {m2.shape}")
    if use_log_star:
        m1 = log_star(m1)
        m2 = log_star(m2)
    if counter is not None:
        counter.rho += 1
    return float(np.sqrt(np.sum((m1 - m2) ** 2)))


def empirical_cov(x: IncrementPath, l: int, m: int) -> np.ndarray:
    """Empirical m x m covariance of the windows starting at l, l+1, ..., n-m+1 (1-based).

    The divisor is the number of averaged windows, n - m - l + 2; the boundary
    case l = n - m + 1 is a single outer product.
    """
    n = len(x)
    if l < 1 or m < 1 or l + m - 1 > n or n - m - l + 2 < 1:
        raise ValueError(f"empty summation range for (l={l}, m={m}) on a path of length {n}")
    return _nu_stack(x.values, n, m)[l - 1]


def _nu_stack(values: np.ndarray, n: int, m: int) -> np.ndarray:
    """All empirical covariance matrices nu(l, m), l = 1..n-m+1, stacked along axis 0."""
    windows = np.lib.stride_tricks.sliding_window_view(values[:n], m)
    outers = np.einsum("li,lj->lij", windows, windows)
    suffix = np.cumsum(outers[::-1], axis=0)[::-1]
    counts = np.arange(n - m + 1, 0, -1, dtype=float)
    return suffix / counts[:, None, None]


def d_hat_rho_count(n: int, cfg: DissimConfig) -> int:
    """Closed form for the number of rho evaluations in one d_hat call."""
    m_n = cfg.mn_rule(n)
    return sum(n - m + 1 for m in range(1, m_n + 1))


def d_hat(x1: IncrementPath, x2: IncrementPath, cfg: DissimConfig = DissimConfig(),
          counter: OpCounter | None = None) -> float:
    """Empirical covariance-based dissimilarity between two increment series.

    Double weighted sum over window sizes m = 1..m_n and window starts
    l = 1..n-m+1 of the Frobenius distance between the two paths' empirical
    covariance matrices, with n the shorter length.
    """
    n = min(len(x1), len(x2))
    if n < 1:
        raise ValueError("both increment series must be nonempty")
    m_n = cfg.mn_rule(n)
    total = 0.0
    for m in range(1, m_n + 1):
        nu1 = _nu_stack(x1.values, n, m)
        nu2 = _nu_stack(x2.values, n, m)
        if cfg.use_log_star:
            nu1 = log_star(nu1)
            nu2 = log_star(nu2)
        diff = nu1 - nu2
        fro = np.sqrt(np.einsum("lij,lij->l", diff, diff))
        w_l = cfg.weight_rule(np.arange(1, n - m + 2))
        total += float(cfg.weight_rule(m)) * float(fro @ w_l)
        if counter is not None:
            counter.rho += n - m + 1
    return total


def localized_increments(z: SamplePath, i: int, K: int) -> IncrementPath:
    """The K+1 consecutive increments of z anchored at sample index i (1-based)."""
    n = len(z)
    if i < 1 or i + K + 1 > n:
        raise ValueError(f"window (i={i}, K={K}) overruns a path of length {n}")
    return IncrementPath(np.diff(z.values[i - 1 : i + K + 1]), parent_id=z.id, delta_t=z.delta_t)


def d_star_hat(z1: SamplePath, z2: SamplePath, cfg: DissimConfig = DissimConfig(),
               counter: OpCounter | None = None) -> float:
    """Localized dissimilarity: mean of d_hat over L windowed increment pairs."""
    n_min = min(len(z1), len(z2))
    K = cfg.check_windows(n_min)
    acc = 0.0
    for i in range(1, cfg.L + 1):
        acc += d_hat(localized_increments(z1, i, K), localized_increments(z2, i, K),
                     cfg, counter)
    return acc / cfg.L


def _normalized(z: SamplePath, H: HurstFunction, i: int, K: int) -> IncrementPath:
    inc = localized_increments(z, i, K)
    scale = z.delta_t ** H(z.time_of(i))
    return IncrementPath(inc.values / scale, parent_id=z.id, delta_t=z.delta_t)


def d_tilde_star(z1: SamplePath, z2: SamplePath, H1: HurstFunction, H2: HurstFunction,
                 cfg: DissimConfig = DissimConfig(),
                 counter: OpCounter | None = None) -> float:
    """Like d_star_hat, but each window is rescaled by delta_t ** H(t_i).

    With delta_t = 1 every scale factor is exactly 1.0, so the result is
    bitwise equal to d_star_hat.
    """
    n_min = min(len(z1), len(z2))
    K = cfg.check_windows(n_min)
    acc = 0.0
    for i in range(1, cfg.L + 1):
        acc += d_hat(_normalized(z1, H1, i, K), _normalized(z2, H2, i, K), cfg, counter)
    return acc / cfg.L


def analytic_d(h1: float, h2: float, var1: float, var2: float, truncation: int = 100,
               use_log_star: bool = False,
               weight_rule: Callable = default_weights) -> float:
    """Truncated theoretical dissimilarity between two fBm-increment covariance structures.

    The population covariance of consecutive fBm increments is stationary, so
    the Frobenius term depends on the window size m only and the double series
    factorizes into (sum of start weights) * (weighted sum over sizes).
    """
    if truncation < 1:
        raise ValueError("truncation must be >= 1")
    w = weight_rule(np.arange(1, truncation + 1))
    total = 0.0
    for m in range(1, truncation + 1):
        c1 = fbm_increment_cov_matrix(h1, var1, m)
        c2 = fbm_increment_cov_matrix(h2, var2, m)
        total += w[m - 1] * rho(c1, c2, use_log_star=use_log_star)
    return float(np.sum(w)) * total


def dissimilarity_matrix(paths, cfg: DissimConfig = DissimConfig(),
                         counter: OpCounter | None = None, workers: int = 1) -> np.ndarray:
    """Symmetric matrix of pairwise d_star_hat values with a zero diagonal."""
    n_paths = len(paths)
    if n_paths < 2:
        raise ValueError("need at least 2 paths")
    out = np.zeros((n_paths, n_paths))
    pairs = [(i, j) for i in range(n_paths) for j in range(i + 1, n_paths)]
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        # Per-pair counters keep the instrumentation race-free; totals are
        # merged after the pool drains so the result matches a serial run.
        locals_ = [OpCounter() if counter is not None else None for _ in pairs]

        def one(arg):
            (i, j), c = arg
            return d_star_hat(paths[i], paths[j], cfg, c)

        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(one, zip(pairs, locals_)))
        if counter is not None:
            counter.rho += sum(c.rho for c in locals_)
    else:
        values = [d_star_hat(paths[i], paths[j], cfg, counter) for i, j in pairs]
    for (i, j), v in zip(pairs, values):
        out[i, j] = v
        out[j, i] = v
    return out
