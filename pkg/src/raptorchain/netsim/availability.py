"""Data availability: where a miner gets the historical blocks it needs.

Open-group blocks are local. A block of a closed group comes from the
miner's cached intermediates if it has them, otherwise from the network:
first a neighbour repair against the responsive miners, then a full decode
of the group. A block nobody can rebuild is unavailable.
"""
import bisect
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import numpy as np

from ..coding.degree import DegreeDistribution
from ..coding.lt import CodedBlock, full_decode, peel, rnm_repair
from ..coding.precode import PrecodeMatrix, precode_encode
from ..consensus.blocks import Block
from ..exceptions import IntegrityError
from .miners import MinerState, Roster

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ClosedGroup:
    """Header-level record of an encoded block group."""

    index: int
    start_height: int
    code: PrecodeMatrix
    distribution: DegreeDistribution
    digests: Tuple[bytes, ...]

    @property
    def end_height(self) -> int:
        return self.start_height + self.code.W - 1

    def position(self, height: int) -> int:
        return height - self.start_height


@dataclass
class WorkCounters:
    """Deterministic work tally for one epoch."""

    local_reads: int = 0
    cache_reads: int = 0
    repairs_attempted: int = 0
    repairs_succeeded: int = 0
    full_decodes: int = 0
    unavailable: int = 0


class NetworkView:
    """What the responsive part of the network can serve during one epoch.

    Everything fetched from the network is memoised for the epoch, since
    every requester sees the same responders.
    """

    def __init__(self, groups: List[ClosedGroup], roster: Roster, responders: Iterable[int]):
        """Initialize the view."""
        self.groups = groups
        self.roster = roster
        self.responders: Set[int] = set(responders)
        self.counters = WorkCounters()
        self._starts = [g.start_height for g in groups]
        self._holders: Dict[int, Tuple[Dict[int, FrozenSet[int]], Dict[int, CodedBlock]]] = {}
        self._repaired: Dict[int, Dict[int, np.ndarray]] = {}
        self._decoded: Dict[int, Optional[np.ndarray]] = {}
        self._blocks: Dict[int, Optional[Block]] = {}
        self._intermediates: Dict[int, Optional[np.ndarray]] = {}

    @property
    def open_start(self) -> int:
        return self.groups[-1].end_height + 1 if self.groups else 1

    def group_of(self, height: int) -> Optional[ClosedGroup]:
        """Closed group holding ``height``, or ``None`` for open-group heights."""
        if height < 1 or height >= self.open_start:
            return None
        k = bisect.bisect_right(self._starts, height) - 1
        return self.groups[k]

    def _coded_blocks(self, group: ClosedGroup):
        if group.index not in self._holders:
            directory: Dict[int, FrozenSet[int]] = {}
            coded: Dict[int, CodedBlock] = {}
            for miner_id in sorted(self.responders):
                if miner_id not in self.roster:
                    continue
                block = self.roster[miner_id].coded.get(group.index)
                if block is not None:
                    directory[miner_id] = block.neighbors
                    coded[miner_id] = block
            self._holders[group.index] = (directory, coded)
        return self._holders[group.index]

    def _decode(self, group: ClosedGroup) -> Optional[np.ndarray]:
        if group.index not in self._decoded:
            _, coded = self._coded_blocks(group)
            self.counters.full_decodes += 1
            sources = full_decode(coded.values(), group.code)
            if sources is None:
                logger.warning(
                    f"Group {group.index} cannot be decoded from {len(coded)} responsive holders"
                )
            self._decoded[group.index] = sources
        return self._decoded[group.index]

    def _checked(self, group: ClosedGroup, height: int, vector: np.ndarray) -> Block:
        block = Block.from_symbols(vector)
        if block.digest != group.digests[group.position(height)]:
            raise IntegrityError(f"Recovered block {height} does not match its recorded digest")
        return block

    def network_block(self, height: int) -> Optional[Block]:
        """Rebuild a closed-group block from responsive miners, memoised."""
        if height in self._blocks:
            return self._blocks[height]
        group = self.group_of(height)
        if group is None:
            raise ValueError(f"Height {height} is not in a closed group")

        w = group.position(height)
        directory, coded = self._coded_blocks(group)
        repaired = self._repaired.setdefault(group.index, {})
        self.counters.repairs_attempted += 1
        vector = rnm_repair(w, directory, coded, repaired)
        if vector is not None:
            self.counters.repairs_succeeded += 1
            repaired[w] = vector
        else:
            sources = self._decode(group)
            vector = sources[w] if sources is not None else None

        block = self._checked(group, height, vector) if vector is not None else None
        if block is None:
            self.counters.unavailable += 1
        self._blocks[height] = block
        return block

    def fetch_blocks(self, miner: MinerState, heights: Iterable[int]) -> Optional[Dict[int, Block]]:
        """Blocks at ``heights`` for ``miner``, or ``None`` if any is unavailable."""
        out: Dict[int, Block] = {}
        for height in sorted(set(int(h) for h in heights)):
            if height < 1:
                continue
            group = self.group_of(height)
            if group is None:
                self.counters.local_reads += 1
                out[height] = miner.raw[height - self.open_start]
                continue
            cached = miner.cache.get(group.index)
            if cached is not None:
                self.counters.cache_reads += 1
                out[height] = self._checked(group, height, cached[group.position(height)])
                continue
            block = self.network_block(height)
            if block is None:
                return None
            out[height] = block
        return out

    def recover_intermediates(self, group: ClosedGroup) -> Optional[np.ndarray]:
        """All W̄ intermediates of a group, for joiners building a fresh block."""
        if group.index in self._intermediates:
            return self._intermediates[group.index]
        _, coded = self._coded_blocks(group)
        values = peel(coded.values(), group.code.W_bar)
        if len(values) == group.code.W_bar:
            result = np.stack([values[i] for i in range(group.code.W_bar)])
        else:
            sources = self._decode(group)
            result = precode_encode(sources, group.code) if sources is not None else None
        self._intermediates[group.index] = result
        return result
