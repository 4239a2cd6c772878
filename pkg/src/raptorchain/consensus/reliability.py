"""Miner reliability and the number of miners each transaction needs."""
import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping

import numpy as np

logger = logging.getLogger(__name__)

RELIABILITY_FLOOR = 1e-6
TRUST_MARGIN = 0.01


def update_reliability(p_prev: float, correct: int, assigned: int, beta: float) -> float:
    """Exponential forgetting toward this epoch's accuracy l/q."""
    if correct < 0 or correct > assigned:
        raise ValueError(f"correct votes ({correct}) must lie in [0, {assigned}]")
    if not 0 < beta < 1:
        raise ValueError(f"beta must lie in (0, 1), got {beta}")
    if assigned == 0:
        return p_prev
    return (1 - beta) * p_prev + beta * correct / assigned


def aggregate_reliability(reliabilities: Iterable[float]) -> float:
    """Geometric mean of the live miners' reliabilities."""
    p = np.fromiter(reliabilities, dtype=float)
    if len(p) == 0:
        raise ValueError("Cannot aggregate reliability over an empty miner set")
    return float(np.exp(np.mean(np.log(np.maximum(p, RELIABILITY_FLOOR)))))


@dataclass(frozen=True)
class MinerRequirement:
    """M(t) and whether it fell back to the whole network."""

    M: int
    degraded: bool = False


def required_miners(P: float, epsilon: float, N: int, margin: float = TRUST_MARGIN) -> MinerRequirement:
    """M = ⌈8 ln(1/ε) P / (1 - 2P)²⌉, clamped to [1, N].

    At or below 0.5 + margin the majority premise is gone and every live
    miner is assigned.
    """
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    if P <= 0.5 + margin:
        return MinerRequirement(M=N, degraded=True)
    M = math.ceil(8 * math.log(1 / epsilon) * P / (1 - 2 * P) ** 2 - 1e-9)
    return MinerRequirement(M=max(1, min(M, N)))


class ReliabilityTracker:
    """Per-miner reliability kept by the base station."""

    def __init__(self, beta: float = 0.1):
        """Initialize an empty tracker."""
        if not 0 < beta < 1:
            raise ValueError(f"beta must lie in (0, 1), got {beta}")
        self.beta = beta
        self.reliability: Dict[int, float] = {}

    def join(self, miner_id: int, rng: np.random.Generator) -> float:
        """Register a miner with reliability drawn from U[0.5, 1]."""
        p = float(rng.uniform(0.5, 1.0))
        self.reliability[miner_id] = p
        return p

    def leave(self, miner_id: int) -> None:
        self.reliability.pop(miner_id, None)

    def update(self, correct: Mapping[int, int], assigned: Mapping[int, int]) -> None:
        """Apply one epoch of votes; miners without assignments keep their value."""
        for miner_id, q in assigned.items():
            if miner_id in self.reliability:
                self.reliability[miner_id] = update_reliability(
                    self.reliability[miner_id], correct.get(miner_id, 0), q, self.beta
                )

    def aggregate(self, miner_ids: Iterable[int]) -> float:
        return aggregate_reliability(self.reliability[j] for j in miner_ids)
