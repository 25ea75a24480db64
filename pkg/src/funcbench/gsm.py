"""Gaussian sequence model: data generation, the quadratic functional, and the
plugin / first-order / higher-order / adaptive estimators.

Coefficient sequences are stored as finite vectors with an exact-zero tail, so
norms and functional values are exact (compensated summation throughout).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .util import fdot, fsum_sq, rng_from_key, uniform_open

__all__ = [
    "SeqVector",
    "GsmSample",
    "SplitSample",
    "quadratic_functional",
    "sample_gsm",
    "inverse_normal_cdf",
    "split_sample",
    "split_from_samples",
    "plugin_q",
    "first_order_q",
    "higher_order_q",
    "adaptive_q",
]


@dataclass(frozen=True)
class SeqVector:
    """Finite real coefficient vector; coordinates beyond the stored range are zero."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=np.float64, copy=True)
        if arr.ndim != 1:
            raise ValueError("coefficient vector must be one-dimensional")
        if arr.size == 0:
            raise ValueError("coefficient vector must be non-empty")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficients must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    @property
    def ambient_len(self) -> int:
        return int(self.coeffs.size)

    def __len__(self) -> int:
        return self.ambient_len

    def norm_sq(self) -> float:
        return fsum_sq(self.coeffs)

    def extended(self, ambient_len: int) -> "SeqVector":
        """Zero-pad to a larger ambient length (the tail is exactly zero anyway)."""
        if ambient_len < self.ambient_len:
            raise ValueError("cannot shrink a coefficient vector")
        if ambient_len == self.ambient_len:
            return self
        out = np.zeros(ambient_len)
        out[: self.ambient_len] = self.coeffs
        return SeqVector(out)


@dataclass(frozen=True)
class GsmSample:
    """One observation sequence y = theta + noise with per-coordinate variance 1/n."""

    y: SeqVector
    n: int
    seed: int


@dataclass(frozen=True)
class SplitSample:
    """Synthetic pair (y1, y2), independent with means theta and variance 2/n each."""

    y1: SeqVector
    y2: SeqVector
    n: int

    def __post_init__(self):
        if self.y1.ambient_len != self.y2.ambient_len:
            raise ValueError("split halves must share ambient length")


def quadratic_functional(theta: SeqVector) -> float:
    """Sum of squared coefficients, exactly."""
    return theta.norm_sq()


def sample_gsm(theta_star: SeqVector, n: int, seed: int, noiseless: bool = False) -> GsmSample:
    """Draw y_j = theta_j + z_j with z_j independent N(0, 1/n).

    ``noiseless`` is a diagnostic switch that forces z = 0 (so y equals the truth).
    Deterministic given ``seed``.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    if noiseless:
        return GsmSample(y=theta_star, n=n, seed=seed)
    rng = rng_from_key("gsm-sample", seed)
    z = rng.standard_normal(theta_star.ambient_len) / math.sqrt(n)
    return GsmSample(y=SeqVector(theta_star.coeffs + z), n=n, seed=seed)


def inverse_normal_cdf(u):
    """Standard normal quantile, accurate to ~1 ulp (scipy's ndtri backend).

    Accepts a scalar or array; rejects arguments outside the open interval (0, 1).
    """
    arr = np.asarray(u, dtype=np.float64)
    if np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise ValueError("quantile argument must lie strictly inside (0, 1)")
    out = ndtri(arr)
    return float(out) if np.isscalar(u) or arr.ndim == 0 else out


def split_sample(sample: GsmSample, seed: int, u=None) -> SplitSample:
    """Split one observation into an independent synthetic pair.

    y1 = y + Phi^{-1}(U)/sqrt(n), y2 = y - Phi^{-1}(U)/sqrt(n) with U uniform(0,1)
    per coordinate; each half has mean theta and variance 2/n, and the halves are
    independent.  ``u`` overrides the uniforms (diagnostic; u = 0.5 gives y1 = y2 = y).
    """
    J = sample.y.ambient_len
    if u is None:
        rng = rng_from_key("gsm-split", seed)
        u_arr = uniform_open(rng, size=J)
    else:
        u_arr = np.broadcast_to(np.asarray(u, dtype=np.float64), (J,))
    z = inverse_normal_cdf(u_arr) / math.sqrt(sample.n)
    return SplitSample(
        y1=SeqVector(sample.y.coeffs + z),
        y2=SeqVector(sample.y.coeffs - z),
        n=sample.n,
    )


def split_from_samples(first: GsmSample, second: GsmSample) -> SplitSample:
    """Diagnostic path: wrap two genuine independent observations as a split pair.

    Each half then has variance 1/n rather than the inflated 2/n of the synthetic
    device; quadratic-term unbiasedness is unaffected.
    """
    if first.n != second.n:
        raise ValueError("both observations must share the noise scale n")
    return SplitSample(y1=first.y, y2=second.y, n=first.n)


def plugin_q(theta_hat: SeqVector) -> float:
    """Plugin estimate: squared norm of the pilot."""
    return theta_hat.norm_sq()


def first_order_q(sample: GsmSample, theta_hat: SeqVector) -> float:
    """One-step estimate 2<y, pilot> - ||pilot||^2.

    Exact moments: mean = Q(theta) - ||theta - pilot||^2, variance = 4||pilot||^2/n.
    """
    if sample.y.ambient_len != theta_hat.ambient_len:
        raise ValueError("observation and pilot must share ambient length")
    return 2.0 * fdot(sample.y.coeffs, theta_hat.coeffs) - theta_hat.norm_sq()


def higher_order_q(
    split: SplitSample, theta_hat: SeqVector, T: int, literal_tail: bool = False
) -> float:
    """Truncated-series estimate: sum_{j<=T} y1_j y2_j plus a one-step tail.

    The tail term is (y1_j + y2_j) * pilot_j - pilot_j^2, whose expectation makes the
    overall bias exactly -sum_{j>T} (pilot_j - theta_j)^2.  ``literal_tail`` switches
    to the variant (y1_j + y2_j) * pilot_j - 2 * pilot_j^2, kept as a diagnostic; its
    tail bias picks up an extra -pilot_j^2 per coordinate.

    T beyond the ambient length behaves as T = ambient length (the tail is zero).
    """
    if T < 0:
        raise ValueError("truncation level must be nonnegative")
    if split.y1.ambient_len != theta_hat.ambient_len:
        raise ValueError("split sample and pilot must share ambient length")
    J = theta_hat.ambient_len
    t = min(T, J)
    y1, y2, th = split.y1.coeffs, split.y2.coeffs, theta_hat.coeffs
    head = fdot(y1[:t], y2[:t])
    tail_th = th[t:]
    tail_sum = y1[t:] + y2[t:]
    scale = 2.0 if literal_tail else 1.0
    tail = math.fsum(tail_sum * tail_th - scale * tail_th * tail_th)
    return head + tail


def adaptive_q(sample: GsmSample, theta_hat: SeqVector, delta: float) -> float:
    """Select plugin vs first-order by comparing their gap to a noise threshold.

    Returns the plugin value when |plugin - first_order| <= 4 ||pilot|| sqrt(4 log(2/delta)/n)
    (ties included), otherwise the first-order value.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    pi = plugin_q(theta_hat)
    fo = first_order_q(sample, theta_hat)
    threshold = (
        4.0 * math.sqrt(theta_hat.norm_sq()) * math.sqrt(4.0 * math.log(2.0 / delta) / sample.n)
    )
    return pi if abs(pi - fo) <= threshold else fo
