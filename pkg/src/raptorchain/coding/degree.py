"""Robust soliton degree distribution with the degree-1 mass folded away."""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

import numpy as np

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DegreeDistribution:
    """Degree distribution Ω over [1, W̄] with Ω(1) = 0.

    ``probabilities[L]`` is the probability of degree L; index 0 is unused.
    """

    W_bar: int
    c: float
    delta: float
    spread: float
    spike: int
    probabilities: np.ndarray

    @property
    def degrees(self) -> np.ndarray:
        return np.arange(1, self.W_bar + 1)

    def sample(
        self, rng: np.random.Generator, size: Optional[int] = None
    ) -> Union[int, np.ndarray]:
        """Draw degrees in [2, W̄]."""
        drawn = rng.choice(self.degrees, size=size, p=self.probabilities[1:])
        drawn = np.clip(drawn, 2, self.W_bar)
        return int(drawn) if size is None else drawn


def build_degree_distribution(W_bar: int, c: float = 0.15, delta: float = 0.5) -> DegreeDistribution:
    """Build Ω for W̄ intermediates.

    Ideal soliton ρ plus the robust term τ, normalised to μ; the degree-1
    mass μ(1) is spread evenly over degrees 2..W̄ so no parity block is a
    plain copy of an intermediate.
    """
    if W_bar < 2:
        raise ValueError(f"W_bar must be at least 2, got {W_bar}")
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    if not 0 < delta <= 1:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    return _build(W_bar, float(c), float(delta))


@lru_cache(maxsize=128)
def _build(W_bar: int, c: float, delta: float) -> DegreeDistribution:
    spread = c * math.sqrt(W_bar) * math.log(W_bar / delta)
    spike = min(W_bar, max(1, round(W_bar / spread)))

    degrees = np.arange(1, W_bar + 1, dtype=float)
    rho = np.empty(W_bar)
    rho[0] = 1.0 / W_bar
    rho[1:] = 1.0 / (degrees[1:] * (degrees[1:] - 1.0))

    tau = np.zeros(W_bar)
    if spike > 1:
        tau[: spike - 1] = spread / (degrees[: spike - 1] * W_bar)
    # ln(S/δ) goes negative for very small groups
    tau[spike - 1] = max(0.0, spread * math.log(spread / delta) / W_bar)

    mu = (rho + tau) / np.sum(rho + tau)

    probabilities = np.zeros(W_bar + 1)
    probabilities[2:] = mu[1:] + mu[0] / (W_bar - 1)
    probabilities /= probabilities.sum()

    logger.debug(f"Degree distribution for W_bar={W_bar}: spread={spread:.3f}, spike={spike}")
    return DegreeDistribution(
        W_bar=W_bar,
        c=c,
        delta=delta,
        spread=spread,
        spike=spike,
        probabilities=probabilities,
    )
