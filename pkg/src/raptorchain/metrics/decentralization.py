"""Decentralization measures over per-epoch participation credits."""
import logging
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np
from numpy.typing import ArrayLike
from scipy import stats

logger = logging.getLogger(__name__)


def gini(credits: ArrayLike) -> float:
    """Gini coefficient of a credit vector; 0 when nobody earned anything.

    Uses the sorted form sum_i (2i - n - 1) x_(i) / (n sum x), which equals
    the mean absolute difference over twice the mean.
    """
    x = np.sort(np.asarray(credits, dtype=float))
    if np.any(x < 0):
        raise ValueError("Credits must be non-negative")
    n = len(x)
    total = x.sum()
    if n == 0 or total == 0:
        return 0.0
    ranks = np.arange(1, n + 1)
    return float(np.sum((2 * ranks - n - 1) * x) / (n * total))


def entropy(credits: ArrayLike) -> float:
    """Base-2 Shannon entropy of the credit shares; 0 when nobody earned anything."""
    x = np.asarray(credits, dtype=float)
    if np.any(x < 0):
        raise ValueError("Credits must be non-negative")
    if len(x) == 0 or x.sum() == 0:
        return 0.0
    return float(stats.entropy(x, base=2))


@dataclass
class ParticipationLedger:
    """Per-epoch credits phi_j(t) of the live miners."""

    credits: Dict[int, np.ndarray] = field(default_factory=dict)

    def record(self, epoch: int, credits: ArrayLike) -> None:
        values = np.asarray(credits, dtype=np.int64)
        if np.any(values < 0):
            raise ValueError("Credits must be non-negative")
        self.credits[epoch] = values

    def epochs(self) -> List[int]:
        return sorted(self.credits)

    def gini_series(self) -> List[float]:
        return [gini(self.credits[t]) for t in self.epochs()]

    def entropy_series(self) -> List[float]:
        return [entropy(self.credits[t]) for t in self.epochs()]
