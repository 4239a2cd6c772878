"""Throughput over a run."""
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..netsim.engine import EpochRecord


@dataclass(frozen=True)
class Throughput:
    """Mean correct confirmations per epoch, raw and divided by the batch size."""

    mean: float
    normalized: float
    wrong_confirmations: float


def throughput(records: Sequence[EpochRecord], batch_size: int) -> Throughput:
    """Average over epochs of transactions confirmed and truly valid."""
    if batch_size < 1:
        raise ValueError(f"batch_size must be positive, got {batch_size}")
    if not records:
        return Throughput(mean=0.0, normalized=0.0, wrong_confirmations=0.0)
    correct = np.array([r.correct_confirmations for r in records], dtype=float)
    wrong = np.array([r.wrong_confirmations for r in records], dtype=float)
    mean = float(correct.mean())
    return Throughput(mean=mean, normalized=mean / batch_size, wrong_confirmations=float(wrong.mean()))
