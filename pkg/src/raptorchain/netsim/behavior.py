"""How each kind of miner votes and proposes states."""
import hashlib
from typing import Dict, Iterable

import numpy as np

from ..consensus.votes import ABSTAIN, ACCEPT, REJECT
from .miners import Behavior, MinerState


def draw_silence(miners: Iterable[MinerState], probability: float, rng: np.random.Generator) -> Dict[int, bool]:
    """Per-epoch silence flags; only stragglers can be silent."""
    stragglers = [m.miner_id for m in miners if m.behavior is Behavior.STRAGGLER]
    silent = rng.random(len(stragglers)) < probability
    return {j: bool(s) for j, s in zip(stragglers, silent)}


def simulate_votes(
    behavior: Behavior,
    truth: np.ndarray,
    available: np.ndarray,
    silent: bool = False,
    discrepancy: int = 1,
) -> np.ndarray:
    """Votes on the assigned transactions.

    Honest miners vote the truth where they could read the data and abstain
    elsewhere. A silent straggler abstains on everything, an active one
    behaves honestly. Dishonest miners negate the truth everywhere. With
    binary votes only one wrong value exists, so ``discrepancy`` never
    changes the outcome.
    """
    if discrepancy < 1:
        raise ValueError("discrepancy must be at least 1")
    truth = np.asarray(truth, dtype=bool)
    if behavior is Behavior.DISHONEST:
        return np.where(truth, REJECT, ACCEPT).astype(np.int8)
    if behavior is Behavior.STRAGGLER and silent:
        return np.full(len(truth), ABSTAIN, dtype=np.int8)
    votes = np.where(truth, ACCEPT, REJECT).astype(np.int8)
    votes[~np.asarray(available, dtype=bool)] = ABSTAIN
    return votes


def forged_state(tx_id: int, epoch: int) -> int:
    """The state colluding dishonest miners all propose for a transaction."""
    digest = hashlib.sha256(b"forged" + tx_id.to_bytes(8, "little") + epoch.to_bytes(4, "little")).digest()
    return int.from_bytes(digest[:8], "little")
