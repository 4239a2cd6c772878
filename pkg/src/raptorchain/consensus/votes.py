"""Vote commitments and per-transaction majority tallies.

Votes are int8 codes: ACCEPT (1), REJECT (0) or ABSTAIN (-1). A miner
commits to SHA-256 over the little-endian serialization

    epoch u32 | miner u64 | count u32 | count x (tx index u32, vote i8) | salt

and later reveals the record; the base station only counts verified reveals.
"""
import hashlib
import logging
import struct
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Set

import numpy as np

from .assignment import AssignmentPlan

logger = logging.getLogger(__name__)

ACCEPT = 1
REJECT = 0
ABSTAIN = -1
SALT_BYTES = 16

_HEADER = struct.Struct("<IQI")
_ENTRY = np.dtype([("tx", "<u4"), ("vote", "i1")])


@dataclass(frozen=True, eq=False)
class VoteRecord:
    """One miner's revealed votes for one epoch."""

    epoch: int
    miner: int
    tx_index: np.ndarray
    votes: np.ndarray
    salt: bytes

    def __post_init__(self):
        if len(self.tx_index) != len(self.votes):
            raise ValueError("tx_index and votes must have equal length")
        if len(self.salt) != SALT_BYTES:
            raise ValueError(f"salt must be {SALT_BYTES} bytes")
        if not np.isin(self.votes, (ACCEPT, REJECT, ABSTAIN)).all():
            raise ValueError("votes must be ACCEPT, REJECT or ABSTAIN")

    def serialize(self) -> bytes:
        entries = np.empty(len(self.votes), dtype=_ENTRY)
        entries["tx"] = self.tx_index
        entries["vote"] = self.votes
        return _HEADER.pack(self.epoch, self.miner, len(self.votes)) + entries.tobytes() + self.salt


def commit_vote(record: VoteRecord) -> bytes:
    """32-byte commitment to a vote record."""
    return hashlib.sha256(record.serialize()).digest()


def reveal_and_verify(record: VoteRecord, commitment: bytes) -> bool:
    """Check a revealed record against its commitment."""
    return commit_vote(record) == commitment


class VoteBoard:
    """Commit-reveal bookkeeping for one epoch."""

    def __init__(self, epoch: int):
        """Initialize an empty board."""
        self.epoch = epoch
        self.commitments: Dict[int, bytes] = {}
        self.verified: Dict[int, VoteRecord] = {}
        self.rejected: Set[int] = set()

    def commit(self, miner: int, commitment: bytes) -> bool:
        """Accept the first commitment per miner."""
        if miner in self.commitments:
            self.rejected.add(miner)
            return False
        self.commitments[miner] = commitment
        return True

    def reveal(self, record: VoteRecord) -> bool:
        """Verify a reveal; a second reveal or a mismatch discards the miner's votes."""
        miner = record.miner
        if record.epoch != self.epoch or miner not in self.commitments:
            return False
        if miner in self.verified or miner in self.rejected:
            logger.warning(f"Equivocation by miner {miner} in epoch {self.epoch}")
            self.verified.pop(miner, None)
            self.rejected.add(miner)
            return False
        if not reveal_and_verify(record, self.commitments[miner]):
            logger.warning(f"Miner {miner} revealed votes that do not match its commitment")
            self.rejected.add(miner)
            return False
        self.verified[miner] = record
        return True

    def digest(self) -> str:
        """Digest over all commitments in miner order."""
        h = hashlib.sha256()
        for miner in sorted(self.commitments):
            h.update(miner.to_bytes(8, "little"))
            h.update(self.commitments[miner])
        return h.hexdigest()


def vote_matrix(plan: AssignmentPlan, records: Mapping[int, VoteRecord]) -> np.ndarray:
    """Votes aligned with ``plan.members``; missing votes are ABSTAIN."""
    K = plan.K
    if K == 0:
        return np.zeros(plan.members.shape, dtype=np.int8)
    ids = np.unique(plan.members)
    table = np.full((len(ids), K), ABSTAIN, dtype=np.int8)
    for miner, record in records.items():
        row = int(np.searchsorted(ids, miner))
        if row < len(ids) and ids[row] == miner and len(record.votes):
            table[row, record.tx_index] = record.votes
    rows = np.searchsorted(ids, plan.members)
    return table[rows, np.arange(K)[:, None]]


def tally_transaction_votes(plan: AssignmentPlan, records: Mapping[int, VoteRecord]) -> np.ndarray:
    """v*_i: strict majority of the assigned set accepted transaction i."""
    return tally_matrix(vote_matrix(plan, records))


def tally_matrix(votes: np.ndarray) -> np.ndarray:
    """Strict-majority decision per row of a vote matrix."""
    if votes.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    accepts = np.count_nonzero(votes == ACCEPT, axis=1)
    return 2 * accepts > votes.shape[1]


def tally_state_updates(
    confirmed: np.ndarray,
    proposals: np.ndarray,
    present: np.ndarray,
) -> List[Optional[bytes]]:
    """Consensus state per transaction, or ``None`` where none has a strict majority.

    ``proposals`` holds 8-byte states as uint64 aligned with the plan's
    members, ``present`` marks which members proposed at all. Rows with
    ``confirmed`` false are skipped.
    """
    m = proposals.shape[1] if proposals.ndim == 2 else 0
    out: List[Optional[bytes]] = []
    for i in range(len(confirmed)):
        if not confirmed[i]:
            out.append(None)
            continue
        values, counts = np.unique(proposals[i][present[i]], return_counts=True)
        if len(counts) and 2 * counts.max() > m:
            out.append(int(values[np.argmax(counts)]).to_bytes(8, "little"))
        else:
            out.append(None)
    return out


def state_code(state: bytes) -> int:
    """uint64 view of an 8-byte state."""
    return int.from_bytes(state, "little")
