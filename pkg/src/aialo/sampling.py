"""Noisy observation oracle, per-parameter sample accounting, and confidence radii.

Each unknown parameter i is observed through independent Gaussian draws with
mean equal to its true value and standard deviation sigma_i.  Every parameter
owns its own PRNG substream, so the draw order across parameters never
perturbs an individual parameter's sample sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, UnknownParameterOnly


class NoisyOracle:
    """Replayable Gaussian sampling oracle over a hidden parameter vector."""

    def __init__(self, true_values: np.ndarray, noise_scale: np.ndarray, rng_seed: int):
        self._true = np.array(true_values, dtype=float)
        self._sigma = np.broadcast_to(np.asarray(noise_scale, dtype=float), self._true.shape).copy()
        if np.any(self._sigma <= 0.0):
            raise ValueError("noise scales must be positive")
        self.rng_seed = int(rng_seed)
        children = np.random.SeedSequence(self.rng_seed).spawn(self._true.size)
        self._rngs = [np.random.Generator(np.random.PCG64(child)) for child in children]

    @property
    def num_params(self) -> int:
        return self._true.size

    def _check_index(self, i: int) -> None:
        if not 0 <= i < self._true.size:
            raise UnknownParameterOnly(f"parameter index {i} is not an unknown parameter")

    def draw_value(self, i: int) -> float:
        self._check_index(i)
        return float(self._rngs[i].normal(self._true[i], self._sigma[i]))

    def draw_values(self, i: int, count: int) -> np.ndarray:
        self._check_index(i)
        return self._rngs[i].normal(self._true[i], self._sigma[i], size=count)


@dataclass(eq=False)
class SampleLedger:
    """Per-parameter sample counts and running sums of observations."""

    num_params: int
    counts: np.ndarray = field(init=False)
    sums: np.ndarray = field(init=False)
    total: int = field(init=False, default=0)

    def __post_init__(self):
        self.counts = np.zeros(self.num_params, dtype=np.int64)
        self.sums = np.zeros(self.num_params, dtype=float)

    def record(self, i: int, value: float) -> None:
        self.counts[i] += 1
        self.sums[i] += value
        self.total += 1

    def record_batch(self, i: int, values: np.ndarray) -> None:
        self.counts[i] += values.size
        self.sums[i] += float(values.sum())
        self.total += values.size

    def mean(self, i: int) -> float:
        if self.counts[i] < 1:
            raise ValueError(f"parameter {i} has no samples yet")
        return self.sums[i] / self.counts[i]

    def means(self) -> np.ndarray:
        if np.any(self.counts < 1):
            raise ValueError("some parameters have no samples yet")
        return self.sums / self.counts


def draw(oracle: NoisyOracle, ledger: SampleLedger, i: int) -> float:
    """Draw one sample of parameter i and record it in the ledger."""
    value = oracle.draw_value(i)
    ledger.record(i, value)
    return value


def draw_batch(oracle: NoisyOracle, ledger: SampleLedger, i: int, count: int) -> np.ndarray:
    """Draw ``count`` samples of parameter i at once (same stream as single draws)."""
    values = oracle.draw_values(i, count)
    ledger.record_batch(i, values)
    return values


def confidence_radius(sigma, s, delta_prime_value):
    """Anytime confidence radius U(s) = 3*sqrt(2*sigma^2*ln(ln(3s/2)/delta')/s).

    Valid whenever ln(3s/2)/delta' > 1; natural logarithms throughout.
    Accepts scalars or numpy arrays for ``sigma`` and ``s``.
    """
    if np.isscalar(s) and np.isscalar(sigma):
        inner = math.log(1.5 * s) / delta_prime_value
        if inner <= 1.0:
            raise DomainError(f"confidence radius undefined: ln(3s/2)/delta' = {inner:.6g} <= 1")
        return 3.0 * math.sqrt(2.0 * sigma * sigma * math.log(inner) / s)
    s = np.asarray(s, dtype=float)
    inner = np.log(1.5 * s) / delta_prime_value
    if np.any(inner <= 1.0):
        raise DomainError("confidence radius undefined for some sample counts")
    return 3.0 * np.sqrt(2.0 * np.asarray(sigma, dtype=float) ** 2 * np.log(inner) / s)


def delta_prime(delta: float, m: int) -> float:
    """Per-parameter confidence level (delta/(20m))^(2/3) used by the radius."""
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0,1), got {delta}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return (delta / (20.0 * m)) ** (2.0 / 3.0)
