"""Miner roster, storage and churn."""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional

import numpy as np

from ..coding.lt import CodedBlock
from ..consensus.blocks import Block
from ..consensus.reliability import ReliabilityTracker
from .config import NetworkConfig

logger = logging.getLogger(__name__)


class Behavior(str, Enum):
    HONEST = "honest"
    DISHONEST = "dishonest"
    STRAGGLER = "straggler"


@dataclass
class MinerState:
    """One miner and what it stores.

    ``raw`` is the open group's block list, shared by every live miner,
    ``coded`` has one block per closed group and ``cache`` the
    intermediates of recent groups when a cache budget is configured.
    """

    miner_id: int
    behavior: Behavior
    joined_epoch: int
    raw: List[Block] = field(default_factory=list)
    coded: Dict[int, CodedBlock] = field(default_factory=dict)
    cache: Dict[int, np.ndarray] = field(default_factory=dict)


@dataclass
class PopulationChange:
    """Who joined and who left at one epoch transition."""

    joined: List[int] = field(default_factory=list)
    left: List[int] = field(default_factory=list)


class Roster:
    """Live miners keyed by id; ids are never reused."""

    def __init__(self):
        """Initialize an empty roster."""
        self.miners: Dict[int, MinerState] = {}
        self.next_id = 0
        self._counts: Dict[Behavior, int] = {b: 0 for b in Behavior}

    def __len__(self) -> int:
        return len(self.miners)

    def __contains__(self, miner_id: int) -> bool:
        return miner_id in self.miners

    def __getitem__(self, miner_id: int) -> MinerState:
        return self.miners[miner_id]

    def ids(self) -> np.ndarray:
        return np.array(sorted(self.miners), dtype=np.int64)

    def ordered(self) -> List[MinerState]:
        return [self.miners[j] for j in sorted(self.miners)]

    def count(self, behavior: Behavior) -> int:
        return self._counts[behavior]

    def add(self, behavior: Behavior, epoch: int, raw: Optional[List[Block]] = None) -> MinerState:
        miner = MinerState(
            miner_id=self.next_id,
            behavior=behavior,
            joined_epoch=epoch,
            raw=raw if raw is not None else [],
        )
        self.miners[miner.miner_id] = miner
        self._counts[behavior] += 1
        self.next_id += 1
        return miner

    def remove(self, miner_id: int) -> MinerState:
        miner = self.miners.pop(miner_id)
        self._counts[miner.behavior] -= 1
        return miner


def initial_roster(config: NetworkConfig, tracker: ReliabilityTracker, rng: np.random.Generator) -> Roster:
    """N0 miners with exactly round(mu N0) dishonest and round(cap N0) stragglers."""
    N = config.initial_miners
    n_dishonest = int(round(config.dishonest_fraction * N))
    n_straggler = int(round(config.straggler_cap * N))
    kinds = (
        [Behavior.DISHONEST] * n_dishonest
        + [Behavior.STRAGGLER] * n_straggler
        + [Behavior.HONEST] * (N - n_dishonest - n_straggler)
    )
    roster = Roster()
    for k in rng.permutation(N):
        miner = roster.add(kinds[k], epoch=0)
        tracker.join(miner.miner_id, rng)
    logger.info(f"Initial roster: {N} miners, {n_dishonest} dishonest, {n_straggler} stragglers")
    return roster


def joiner_behavior(roster: Roster, config: NetworkConfig, rng: np.random.Generator) -> Behavior:
    """Dishonest with probability mu; otherwise a straggler while the cap allows."""
    if rng.random() < config.dishonest_fraction:
        return Behavior.DISHONEST
    honest_share = 1 - config.dishonest_fraction
    if config.straggler_cap > 0 and rng.random() < min(1.0, config.straggler_cap / honest_share):
        if roster.count(Behavior.STRAGGLER) + 1 <= config.straggler_cap * (len(roster) + 1):
            return Behavior.STRAGGLER
    return Behavior.HONEST


def step_population(
    roster: Roster,
    config: NetworkConfig,
    epoch: int,
    rng: np.random.Generator,
    tracker: ReliabilityTracker,
    backfill: Optional[Callable[[MinerState], None]] = None,
    open_blocks: Optional[List[Block]] = None,
) -> PopulationChange:
    """Apply one epoch transition of leaves then joins.

    Leaving miners take their coded blocks with them. Joiners share the open
    group's raw blocks and ``backfill`` gives them a block per closed group.
    """
    change = PopulationChange()

    leaves = int(rng.poisson(config.leave_rate)) if config.leave_rate > 0 else 0
    leaves = min(leaves, max(0, len(roster) - config.min_miners))
    if leaves:
        for miner_id in rng.choice(roster.ids(), size=leaves, replace=False):
            roster.remove(int(miner_id))
            tracker.leave(int(miner_id))
            change.left.append(int(miner_id))

    joins = int(rng.poisson(config.join_rate)) if config.join_rate > 0 else 0
    for _ in range(joins):
        miner = roster.add(joiner_behavior(roster, config, rng), epoch=epoch, raw=open_blocks)
        tracker.join(miner.miner_id, rng)
        if backfill is not None:
            backfill(miner)
        change.joined.append(miner.miner_id)

    if change.joined or change.left:
        logger.debug(f"Epoch {epoch}: {len(change.joined)} joined, {len(change.left)} left, N={len(roster)}")
    return change
