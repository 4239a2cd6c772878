"""Random assignment of selected transactions to miners."""
import hashlib
from dataclasses import dataclass
from typing import Dict

import numpy as np


@dataclass(frozen=True, eq=False)
class AssignmentPlan:
    """Row i lists the miners assigned to selected transaction i."""

    epoch: int
    M: int
    members: np.ndarray

    @property
    def K(self) -> int:
        return self.members.shape[0]

    @property
    def group_size(self) -> int:
        return self.members.shape[1] if self.members.ndim == 2 else 0

    def assigned_counts(self) -> Dict[int, int]:
        """q_j(t) for every miner with at least one assignment."""
        ids, counts = np.unique(self.members, return_counts=True)
        return {int(i): int(c) for i, c in zip(ids, counts)}

    def digest(self) -> str:
        return hashlib.sha256(np.ascontiguousarray(self.members, dtype="<i8").tobytes()).hexdigest()


def assign_miners(K: int, M: int, live_ids: np.ndarray, rng: np.random.Generator, epoch: int = 0) -> AssignmentPlan:
    """Independent uniform sample of min(M, N) live miners per transaction."""
    live = np.sort(np.asarray(live_ids, dtype=np.int64))
    if len(live) == 0:
        raise ValueError("No live miners to assign")
    m = min(M, len(live))
    if K == 0:
        return AssignmentPlan(epoch=epoch, M=M, members=np.zeros((0, m), dtype=np.int64))
    if m == len(live):
        members = np.tile(live, (K, 1))
    else:
        members = np.sort(rng.permuted(np.tile(live, (K, 1)), axis=1)[:, :m], axis=1)
    return AssignmentPlan(epoch=epoch, M=M, members=members)
