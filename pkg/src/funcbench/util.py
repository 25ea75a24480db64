"""Shared numerics: compensated reductions and reproducible stream derivation."""

from __future__ import annotations

import hashlib
import math

import numpy as np

__all__ = [
    "fsum",
    "fdot",
    "fsum_sq",
    "stream_key",
    "rng_from_key",
    "uniform_open",
    "fmt_float",
]


def fsum(values) -> float:
    """Exactly rounded sum of a 1-D array (compensated)."""
    return math.fsum(np.asarray(values, dtype=np.float64))


def fdot(x, y) -> float:
    """Compensated inner product of two equal-length vectors."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"shape mismatch in inner product: {x.shape} vs {y.shape}")
    return math.fsum(x * y)


def fsum_sq(x) -> float:
    """Compensated sum of squares."""
    x = np.asarray(x, dtype=np.float64)
    return math.fsum(x * x)


def stream_key(*parts) -> int:
    """Derive a 128-bit stream key from a tuple of hashable parts.

    Uses BLAKE2 on the canonical repr so keys are stable across processes
    and platforms (the builtin ``hash`` is salted and unsuitable).
    """
    token = "\x1f".join(repr(p) for p in parts).encode()
    return int.from_bytes(hashlib.blake2b(token, digest_size=16).digest(), "big")


def rng_from_key(*parts) -> np.random.Generator:
    """Counter-based generator on an independent substream keyed by ``parts``."""
    return np.random.Generator(np.random.Philox(key=stream_key(*parts)))


def uniform_open(rng: np.random.Generator, size=None):
    """Uniform draws strictly inside (0, 1).

    Draws integers on {1, ..., 2**53 - 1} so 0.0 and 1.0 are unreachable,
    which keeps downstream quantile transforms finite.
    """
    return rng.integers(1, 1 << 53, size=size) / float(1 << 53)


def fmt_float(x: float) -> str:
    """Shortest round-trip decimal form, stable for byte-identical CSV output."""
    return repr(float(x))
