"""Evaluation metrics: storage, decentralization and throughput."""

from .decentralization import ParticipationLedger, entropy, gini
from .storage import storage_fraction
from .throughput import Throughput, throughput

__all__ = [
    "ParticipationLedger",
    "Throughput",
    "entropy",
    "gini",
    "storage_fraction",
    "throughput",
]
