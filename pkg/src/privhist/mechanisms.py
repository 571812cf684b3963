"""Differential-privacy primitives: Laplace noise and the exponential mechanism.

All randomness flows through :class:`RngStream`, a seeded counter-based
stream (Philox) with named substreams, so any pipeline built on these
primitives replays exactly from ``(seed, stream)`` and independent pieces
of work can draw from independent streams.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .histogram import Histogram, NoisyHistogram

_MASK64 = (1 << 64) - 1


def _mix64(a: int, b: int) -> int:
    """splitmix64-style finaliser combining a stream id with a child index."""
    x = (a * 0x9E3779B97F4A7C15 + b * 0xBF58476D1CE4E5B9 + 0x94D049BB133111EB) & _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    x ^= x >> 31
    return x


@dataclass
class RngStream:
    """Reproducible randomness source identified by ``(seed, stream)``.

    Two streams with identical ``(seed, stream)`` yield identical sample
    sequences; distinct stream ids are statistically independent. A stream
    is stateful and must not be shared across concurrent consumers: derive
    children with :meth:`child` instead.
    """

    seed: int
    stream: int = 0
    _gen: Optional[np.random.Generator] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.stream < 0:
            raise ValueError("stream id must be non-negative")

    def generator(self) -> np.random.Generator:
        if self._gen is None:
            ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
            self._gen = np.random.Generator(np.random.Philox(ss))
        return self._gen

    def child(self, index: int) -> "RngStream":
        """A named, independent substream; deterministic in (stream, index)."""
        return RngStream(self.seed, _mix64(self.stream, index))


@dataclass(frozen=True)
class PrivacyBudget:
    """Total budget ``epsilon`` split between a tuning and a release phase.

    ``eps1 = eps1_fraction * epsilon`` pays for parameter selection and the
    remainder ``eps2`` for the noisy release; the two compose sequentially
    to ``epsilon`` exactly.
    """

    epsilon: float
    eps1_fraction: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not 0.0 < self.eps1_fraction < 1.0:
            raise ValueError("eps1_fraction must lie strictly between 0 and 1")

    @property
    def eps1(self) -> float:
        return self.eps1_fraction * self.epsilon

    @property
    def eps2(self) -> float:
        return self.epsilon - self.eps1


@dataclass(frozen=True)
class NoiseSpec:
    """Laplace scale for a count release; sensitivity of a histogram is 1."""

    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lambda must be positive")

    @classmethod
    def from_budget(cls, budget: PrivacyBudget) -> "NoiseSpec":
        return cls(1.0 / budget.eps2)


def _laplace(gen: np.random.Generator, lam: float, size=None):
    # Inverse CDF: u uniform on (-1/2, 1/2], sample = -lam*sign(u)*ln(1-2|u|).
    u = 0.5 - gen.random(size)
    return -lam * np.sign(u) * np.log1p(-2.0 * np.abs(u))


def laplace_sample(rng: RngStream, lam: float) -> float:
    """One draw from Lap(0, lam); E|Y| = lam and Var(Y) = 2*lam**2."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    return float(_laplace(rng.generator(), lam))


def laplace_noise(rng: RngStream, lam: float, size: int) -> np.ndarray:
    """A vector of ``size`` i.i.d. Lap(0, lam) draws."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    return _laplace(rng.generator(), lam, size)


def perturb_histogram(h: Histogram, eps2: float, rng: RngStream) -> NoisyHistogram:
    """Add i.i.d. Lap(0, 1/eps2) noise per cell; no clamping or rounding."""
    if not eps2 > 0:
        raise ValueError("eps2 must be positive")
    noise = laplace_noise(rng, 1.0 / eps2, h.counts.size)
    return NoisyHistogram(h.grid, h.counts + noise)


def exp_mechanism_probabilities(scores: Sequence[float],
                                sensitivities: Sequence[float],
                                eps1: float) -> np.ndarray:
    """Selection distribution p_r ∝ exp(eps1 * score_r / (2 * sensitivity_r)).

    Sensitivities are per response, so callers may pass either a constant
    (global) bound or a tighter response-dependent one. Computed stably by
    shifting exponents by their maximum before exponentiation.
    """
    s = np.asarray(scores, dtype=float)
    d = np.asarray(sensitivities, dtype=float)
    if s.size == 0:
        raise ValueError("scores must be non-empty")
    if s.shape != d.shape:
        raise ValueError("scores and sensitivities must have equal length")
    if np.any(d <= 0):
        raise ValueError("sensitivities must be positive")
    if not eps1 > 0:
        raise ValueError("eps1 must be positive")
    z = eps1 * s / (2.0 * d)
    w = np.exp(z - z.max())
    return w / w.sum()


def exp_mechanism_sample(rng: RngStream, probs: Sequence[float]) -> int:
    """Draw an index from a categorical distribution; deterministic per stream."""
    p = np.asarray(probs, dtype=float)
    if p.size == 0:
        raise ValueError("probability vector must be non-empty")
    if np.any(p < 0):
        raise ValueError("probabilities must be non-negative")
    if abs(p.sum() - 1.0) > 1e-12:
        raise ValueError(f"probabilities must sum to 1, got {p.sum()!r}")
    u = rng.generator().random()
    idx = int(np.searchsorted(np.cumsum(p), u, side="right"))
    return min(idx, p.size - 1)
