"""LT layer: per-miner coded blocks, neighbour repair and peeling decode."""
import logging
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import IntegrityError
from .degree import DegreeDistribution
from .precode import PrecodeMatrix, precode_erasure_decode

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CodedBlock:
    """One miner's stored block for one closed group."""

    owner: int
    group: int
    neighbors: FrozenSet[int]
    payload: np.ndarray

    @property
    def degree(self) -> int:
        return len(self.neighbors)

    @property
    def systematic(self) -> bool:
        return len(self.neighbors) == 1


def systematic_block(intermediates: np.ndarray, j: int, owner: int = -1, group: int = 0) -> CodedBlock:
    """Degree-1 block holding intermediate ``j`` verbatim."""
    if not 0 <= j < len(intermediates):
        raise ValueError(f"Intermediate index {j} outside [0, {len(intermediates)})")
    return CodedBlock(owner=owner, group=group, neighbors=frozenset((j,)), payload=intermediates[j])


def lt_encode_parity(
    intermediates: np.ndarray,
    distribution: DegreeDistribution,
    rng: np.random.Generator,
    owner: int = -1,
    group: int = 0,
    neighbors: Optional[Iterable[int]] = None,
) -> CodedBlock:
    """XOR of a random neighbour set whose size is drawn from Ω.

    ``neighbors`` pins the set instead of sampling it.
    """
    W_bar = len(intermediates)
    if distribution.W_bar != W_bar:
        raise ValueError(f"Distribution built for {distribution.W_bar} intermediates, got {W_bar}")

    if neighbors is None:
        degree = distribution.sample(rng)
        chosen = np.sort(rng.choice(W_bar, size=degree, replace=False))
    else:
        chosen = np.array(sorted(set(neighbors)), dtype=np.int64)
        if len(chosen) < 2 or chosen[0] < 0 or chosen[-1] >= W_bar:
            raise ValueError(f"Invalid neighbour set {neighbors!r}")

    payload = np.bitwise_xor.reduce(intermediates[chosen], axis=0)
    return CodedBlock(
        owner=owner,
        group=group,
        neighbors=frozenset(int(i) for i in chosen),
        payload=payload,
    )


def rnm_repair(
    target: int,
    directory: Mapping[int, FrozenSet[int]],
    coded: Mapping[int, CodedBlock],
    cache: Mapping[int, np.ndarray],
) -> Optional[np.ndarray]:
    """Rebuild intermediate ``target`` from one responsive neighbour.

    ``directory`` maps responsive miners to the neighbour sets of their
    blocks, ``coded`` gives their payloads and ``cache`` the intermediates
    the requester already holds. The first block (lowest degree, then lowest
    miner id) whose other neighbours are all cached wins. Returns ``None``
    when no such block exists.
    """
    candidates = sorted(
        (len(neighbors), miner)
        for miner, neighbors in directory.items()
        if target in neighbors and miner in coded
    )
    for _, miner in candidates:
        others = directory[miner] - {target}
        if all(i in cache for i in others):
            value = coded[miner].payload.copy()
            for i in others:
                value ^= cache[i]
            return value
    return None


def peel_schedule(neighbor_sets: Sequence[FrozenSet[int]], W_bar: int) -> List[Tuple[int, int]]:
    """Structural peel: returns (intermediate, block position) in resolution order.

    Runs on index sets only, so it is also what the group-size Monte Carlo
    uses. Blocks that never reach degree one are left unused.
    """
    schedule: List[Tuple[int, int]] = []
    resolved = set()

    for k, nbrs in enumerate(neighbor_sets):
        if len(nbrs) == 1:
            (i,) = nbrs
            if i not in resolved:
                resolved.add(i)
                schedule.append((i, k))
    if len(resolved) == W_bar:
        return schedule

    remaining = [set(nbrs) - resolved for nbrs in neighbor_sets]
    holders: Dict[int, List[int]] = defaultdict(list)
    for k, rem in enumerate(remaining):
        if len(neighbor_sets[k]) > 1:
            for i in rem:
                holders[i].append(k)

    ripple = deque(k for k, rem in enumerate(remaining) if len(rem) == 1 and len(neighbor_sets[k]) > 1)
    while ripple and len(resolved) < W_bar:
        k = ripple.popleft()
        rem = remaining[k]
        if len(rem) != 1:
            continue
        (i,) = rem
        resolved.add(i)
        schedule.append((i, k))
        for k2 in holders.pop(i, ()):
            remaining[k2].discard(i)
            if len(remaining[k2]) == 1:
                ripple.append(k2)

    return schedule


def peel(blocks: Iterable[CodedBlock], W_bar: int) -> Dict[int, np.ndarray]:
    """Peel as far as possible; returns every intermediate that resolved.

    Raises :class:`IntegrityError` if two blocks share a neighbour set but
    carry different payloads.
    """
    unique: Dict[FrozenSet[int], CodedBlock] = {}
    for block in blocks:
        seen = unique.get(block.neighbors)
        if seen is None:
            unique[block.neighbors] = block
        elif not np.array_equal(seen.payload, block.payload):
            raise IntegrityError(
                f"Blocks from miners {seen.owner} and {block.owner} disagree on "
                f"neighbour set {sorted(block.neighbors)}"
            )

    ordered = list(unique.values())
    schedule = peel_schedule([b.neighbors for b in ordered], W_bar)

    values: Dict[int, np.ndarray] = {}
    for i, k in schedule:
        block = ordered[k]
        value = block.payload.copy()
        for h in block.neighbors:
            if h != i:
                value ^= values[h]
        values[i] = value
    return values


def peel_decode(blocks: Iterable[CodedBlock], W_bar: int) -> Optional[np.ndarray]:
    """All W̄ intermediates as a (W̄, s) array, or ``None`` if peeling stalls."""
    values = peel(blocks, W_bar)
    if len(values) < W_bar:
        return None
    return np.stack([values[i] for i in range(W_bar)])


def full_decode(blocks: Iterable[CodedBlock], code: PrecodeMatrix) -> Optional[np.ndarray]:
    """Peel, then erasure-decode the precode from any W resolved intermediates.

    Returns the W source vectors, or ``None`` when fewer than W resolve.
    """
    values = peel(blocks, code.W_bar)
    if len(values) < code.W:
        logger.debug(f"Peeling resolved {len(values)} of {code.W_bar}; need {code.W}")
        return None
    if all(j in values for j in range(code.W)):
        return np.stack([values[j] for j in range(code.W)])
    return precode_erasure_decode(values, code)
