"""The epoch engine.

Each epoch runs the four stages in order: the base station selects a batch
and assigns miners, miners vote through commit-reveal, the network agrees
on states and appends one block, and at a group boundary every miner swaps
its raw blocks for one coded block.
"""
import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..coding.degree import build_degree_distribution
from ..coding.group_size import GroupSize, choose_group_size
from ..coding.lt import lt_encode_parity, systematic_block
from ..coding.precode import PrecodeMatrix, precode_encode
from ..consensus.assignment import AssignmentPlan, assign_miners
from ..consensus.blocks import GENESIS_PARENT, Block, BlockRow, form_block, max_rows
from ..consensus.reliability import ReliabilityTracker, required_miners
from ..consensus.votes import (
    ABSTAIN,
    ACCEPT,
    SALT_BYTES,
    VoteBoard,
    VoteRecord,
    commit_vote,
    state_code,
    tally_matrix,
    tally_state_updates,
    vote_matrix,
)
from ..txpool.config import SelectionConfig, WorkloadConfig
from ..txpool.selection import select_transactions
from ..txpool.transactions import PAYLOAD_BYTES, Transaction, TransactionFactory
from .availability import ClosedGroup, NetworkView, WorkCounters
from .behavior import draw_silence, forged_state, simulate_votes
from .config import NetworkConfig
from .miners import Behavior, MinerState, Roster, initial_roster, step_population

logger = logging.getLogger(__name__)

STREAMS = ("population", "transactions", "coding", "selection", "assignment", "votes")
ROW_BYTES = 8 + 3 * 2 + PAYLOAD_BYTES


@dataclass
class EpochDetail:
    """Full per-epoch matrices, kept only when requested."""

    plan: AssignmentPlan
    votes: np.ndarray
    block: Block


@dataclass
class EpochRecord:
    """Everything one epoch produced."""

    epoch: int
    miners: int
    joined: int
    left: int
    batch: int
    fresh: int
    backlog_in: int
    backlog_out: int
    expired: int
    demoted: int
    depth_limit: int
    selected_ids: Tuple[int, ...]
    M: int
    reliability: float
    degraded: bool
    v_star: Tuple[bool, ...]
    confirmed_ids: Tuple[int, ...]
    correct_confirmations: int
    wrong_confirmations: int
    wrong_rejections: int
    wrong_decisions: int
    group_closed: bool
    closed_group_sizes: Tuple[int, ...]
    block_digest: str
    assignment_digest: str
    vote_digest: str
    counters: WorkCounters
    credits: np.ndarray = field(repr=False)
    detail: Optional[EpochDetail] = field(default=None, repr=False, compare=False)

    @property
    def K(self) -> int:
        return len(self.selected_ids)

    def to_dict(self) -> dict:
        out = {k: v for k, v in asdict(self).items() if k not in ("credits", "detail")}
        out["credits"] = self.credits.tolist()
        return out

    def fingerprint(self) -> str:
        """SHA-256 over a canonical JSON rendering of the record."""
        payload = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()


@dataclass
class EpochState:
    """Ledger state carried from one epoch to the next."""

    epoch: int = 0
    backlog: List[Transaction] = field(default_factory=list)
    depth_limit: int = 0
    open_blocks: List[Block] = field(default_factory=list)
    closed: List[ClosedGroup] = field(default_factory=list)
    parent: bytes = GENESIS_PARENT
    group_target: Optional[GroupSize] = None

    @property
    def boundaries(self) -> List[int]:
        return [g.end_height for g in self.closed]


@dataclass
class Batch:
    """One epoch's batch and what happened to the backlog while forming it."""

    transactions: List[Transaction]
    backlog: List[Transaction]
    fresh: int
    expired: int


def generate_transactions(
    factory: TransactionFactory,
    backlog: Sequence[Transaction],
    epoch: int,
    rng: np.random.Generator,
    ttl: Optional[int] = None,
) -> Batch:
    """Fill the batch with backlog first, oldest first, then fresh draws.

    Backlog entries waiting longer than ``ttl`` epochs expire. Anything that
    does not fit stays in the returned backlog.
    """
    n = factory.config.batch_size
    kept = [tx for tx in backlog if ttl is None or epoch - tx.submitted_epoch <= ttl]
    kept.sort(key=lambda tx: (tx.submitted_epoch, tx.tx_id))
    taken = kept[:n]
    fresh = factory.draw(n - len(taken), epoch, epoch - 1, rng)
    return Batch(
        transactions=taken + fresh,
        backlog=kept[n:],
        fresh=len(fresh),
        expired=len(backlog) - len(kept),
    )


def adjust_depth_limit(
    batch: Sequence[Transaction],
    boundaries: Sequence[int],
    epoch: int,
    realized: bool = False,
) -> int:
    """Smallest boundary-derived D under which backlog is a strict minority.

    Candidates run from t minus the latest boundary back through older
    boundaries to t itself. A backlogged transaction counts against D while
    its depth (realized, or the mean when only that is known) exceeds D.
    """
    candidates = [epoch - b for b in sorted(boundaries, reverse=True)] + [epoch]
    backlogged = [tx for tx in batch if tx.submitted_epoch < epoch]
    depths = np.array([tx.depth if realized else tx.depth_mean for tx in backlogged], dtype=float)
    for D in candidates:
        if 2 * int(np.count_nonzero(depths > D)) < len(batch):
            return D
    return epoch


def encode_group_boundary(
    blocks: Sequence[Block],
    roster: Roster,
    target: GroupSize,
    config: NetworkConfig,
    index: int,
    rng: np.random.Generator,
) -> Optional[ClosedGroup]:
    """Encode a finished group and hand every live miner its coded block.

    The first W̄ miners by id hold systematic blocks, the rest LT parity.
    Returns ``None`` when the network is too small, deferring the boundary.
    """
    N = len(roster)
    if N <= target.W_bar:
        logger.warning(f"Boundary deferred: N={N} does not exceed W_bar={target.W_bar}")
        return None

    code = PrecodeMatrix(W=target.W, W_bar=target.W_bar, p=config.field_bits)
    sources = np.stack([b.to_symbols(config.block_size, config.field_bits) for b in blocks])
    intermediates = precode_encode(sources, code)
    distribution = build_degree_distribution(target.W_bar, config.degree_c, config.degree_delta)

    for k, miner in enumerate(roster.ordered()):
        if k < target.W_bar:
            coded = systematic_block(intermediates, k, owner=miner.miner_id, group=index)
        else:
            coded = lt_encode_parity(intermediates, distribution, rng, owner=miner.miner_id, group=index)
        miner.coded[index] = coded
        if config.cache_groups > 0:
            miner.cache[index] = intermediates
            for old in [g for g in miner.cache if g <= index - config.cache_groups]:
                del miner.cache[old]

    group = ClosedGroup(
        index=index,
        start_height=blocks[0].epoch,
        code=code,
        distribution=distribution,
        digests=tuple(b.digest for b in blocks),
    )
    logger.info(
        f"Encoded group {index}: heights {group.start_height}-{group.end_height}, "
        f"W={code.W}, W_bar={code.W_bar}, N={N}"
    )
    return group


class Simulation:
    """One seeded run of the network."""

    def __init__(
        self,
        network: NetworkConfig,
        workload: WorkloadConfig,
        selection: SelectionConfig,
        seed: int = 0,
        record_details: bool = False,
    ):
        """Initialize the network at epoch 0."""
        self.network = network
        self.workload = workload
        self.selection = selection
        self.seed = seed
        self.record_details = record_details

        children = np.random.SeedSequence(seed).spawn(len(STREAMS))
        self.rng: Dict[str, np.random.Generator] = {
            name: np.random.default_rng(child) for name, child in zip(STREAMS, children)
        }
        self.tracker = ReliabilityTracker(beta=network.beta)
        self.roster = initial_roster(network, self.tracker, self.rng["population"])
        self.factory = TransactionFactory(workload)
        self.state = EpochState()
        self._degraded = False
        for miner in self.roster.ordered():
            miner.raw = self.state.open_blocks
        capacity = max_rows(network.block_size, ROW_BYTES)
        if capacity < workload.batch_size:
            logger.warning(
                f"Block size {network.block_size} holds {capacity} rows, below the batch of {workload.batch_size}; "
                "overflowing confirmations will be demoted"
            )

    def _responders(self, silence: Dict[int, bool]) -> List[int]:
        return [
            m.miner_id
            for m in self.roster.ordered()
            if m.behavior is not Behavior.DISHONEST and not silence.get(m.miner_id, False)
        ]

    def _backfill(self, miner: MinerState, view: NetworkView) -> None:
        for group in self.state.closed:
            intermediates = view.recover_intermediates(group)
            if intermediates is None:
                logger.warning(f"Joiner {miner.miner_id} cannot backfill group {group.index}")
                continue
            miner.coded[group.index] = lt_encode_parity(
                intermediates, group.distribution, self.rng["coding"], owner=miner.miner_id, group=group.index
            )

    def run_epoch(self) -> EpochRecord:
        """Advance the network by one epoch."""
        st = self.state
        cfg = self.network
        t = st.epoch + 1
        backlog_in = len(st.backlog)

        # Stage 0: churn, with joiners backfilled from the responsive network
        silence = draw_silence(self.roster.ordered(), cfg.straggler_silence, self.rng["population"])
        views: List[NetworkView] = []

        def view() -> NetworkView:
            if not views:
                views.append(NetworkView(st.closed, self.roster, self._responders(silence)))
            return views[0]

        change = step_population(
            self.roster,
            cfg,
            t,
            self.rng["population"],
            self.tracker,
            backfill=lambda miner: self._backfill(miner, view()),
            open_blocks=st.open_blocks,
        )
        joiners = [self.roster[j] for j in change.joined]
        silence.update(draw_silence(joiners, cfg.straggler_silence, self.rng["population"]))
        net = NetworkView(st.closed, self.roster, self._responders(silence))

        if st.group_target is None:
            st.group_target = self._choose_group(len(self.roster))

        # Stage 1: batch, depth limit, selection, assignment
        drawn = generate_transactions(
            self.factory, st.backlog, t, self.rng["transactions"], ttl=self.workload.backlog_ttl
        )
        batch = drawn.transactions
        st.backlog = drawn.backlog
        realized = self.selection.selection_mode == "deterministic"
        st.depth_limit = adjust_depth_limit(batch, st.boundaries, t, realized)
        result = select_transactions(
            batch,
            self.selection.problem(st.depth_limit),
            self.rng["selection"],
            self.selection.rounding_trials,
        )
        selected = result.selected
        K = len(selected)

        live = self.roster.ids()
        P = self.tracker.aggregate(live.tolist())
        requirement = required_miners(P, cfg.epsilon, len(live))
        if requirement.degraded and not self._degraded:
            logger.warning(f"Epoch {t}: aggregate reliability {P:.4f} too low, assigning all {len(live)} miners")
        self._degraded = requirement.degraded
        plan = assign_miners(K, requirement.M, live, self.rng["assignment"], epoch=t)

        # Stage 2: availability, commit-reveal voting, tally
        truth = np.array([tx.valid for tx in selected], dtype=bool)
        heights = np.array([tx.dependency_height(t) for tx in selected], dtype=np.int64)

        board = VoteBoard(epoch=t)
        m = plan.group_size
        flat = plan.members.ravel()
        tx_of = np.repeat(np.arange(K), m)
        order = np.argsort(flat, kind="stable")
        miner_ids, starts = np.unique(flat[order], return_index=True)
        bounds = list(starts) + [len(flat)]
        for k, miner_id in enumerate(miner_ids):
            miner = self.roster[int(miner_id)]
            idx = tx_of[order[bounds[k] : bounds[k + 1]]]
            if silence.get(miner.miner_id, False):
                continue
            available = self._readable(net, miner, heights[idx])
            votes = simulate_votes(miner.behavior, truth[idx], available, discrepancy=cfg.discrepancy)
            record = VoteRecord(
                epoch=t,
                miner=miner.miner_id,
                tx_index=idx,
                votes=votes,
                salt=self.rng["votes"].bytes(SALT_BYTES),
            )
            board.commit(miner.miner_id, commit_vote(record))
            board.reveal(record)

        votes = vote_matrix(plan, board.verified)
        v_star = tally_matrix(votes)
        self._update_reliability(plan, votes, v_star)

        # Stage 3: state agreement and the block
        states = self._agree_states(plan, selected, votes, v_star, t)
        appended = [i for i in range(K) if v_star[i] and states[i] is not None]
        demoted = [selected[i] for i in range(K) if v_star[i] and states[i] is None]

        capacity = max_rows(cfg.block_size, ROW_BYTES)
        if len(appended) > capacity:
            reward = result.rewards[result.mask]
            appended.sort(key=lambda i: (-reward[i], selected[i].tx_id))
            overflow = appended[capacity:]
            demoted += [selected[i] for i in overflow]
            appended = sorted(appended[:capacity])
            logger.warning(f"Epoch {t}: block full, {len(overflow)} confirmed transactions demoted")

        rows = [BlockRow(selected[i].tx_id, selected[i].ledger, states[i], selected[i].call) for i in appended]
        block = form_block(t, rows, st.parent, cfg.block_size)
        st.parent = block.digest
        st.open_blocks.append(block)

        credits = self._credits(plan, votes, appended, live)

        # backlog: unselected batch members and demoted rows wait another epoch
        chosen = {tx.tx_id for tx in selected}
        waiting = [tx for tx in batch if tx.tx_id not in chosen] + demoted
        for tx in st.backlog + waiting:
            tx.age += 1
        st.backlog.extend(waiting)

        # Stage 4: group boundary
        group_closed = self._maybe_close_group()

        appended_set = set(appended)
        record = EpochRecord(
            epoch=t,
            miners=len(self.roster),
            joined=len(change.joined),
            left=len(change.left),
            batch=len(batch),
            fresh=drawn.fresh,
            backlog_in=backlog_in,
            backlog_out=len(st.backlog),
            expired=drawn.expired,
            demoted=len(demoted),
            depth_limit=st.depth_limit,
            selected_ids=tuple(tx.tx_id for tx in selected),
            M=requirement.M,
            reliability=P,
            degraded=requirement.degraded,
            v_star=tuple(bool(v) for v in v_star),
            confirmed_ids=tuple(selected[i].tx_id for i in sorted(appended_set)),
            correct_confirmations=sum(1 for i in appended_set if truth[i]),
            wrong_confirmations=sum(1 for i in appended_set if not truth[i]),
            wrong_rejections=int(np.count_nonzero(truth & ~v_star)) if K else 0,
            wrong_decisions=int(np.count_nonzero(truth != v_star)) if K else 0,
            group_closed=group_closed,
            closed_group_sizes=tuple(g.code.W for g in st.closed),
            block_digest=block.digest.hex(),
            assignment_digest=plan.digest(),
            vote_digest=board.digest(),
            counters=net.counters,
            credits=credits,
            detail=EpochDetail(plan=plan, votes=votes, block=block) if self.record_details else None,
        )
        st.epoch = t
        logger.debug(
            f"Epoch {t}: K={K}, confirmed={len(appended)}, M={requirement.M}, D={st.depth_limit}, N={len(self.roster)}"
        )
        return record

    def _choose_group(self, N: int) -> GroupSize:
        cfg = self.network
        return choose_group_size(
            N,
            rate=cfg.precode_rate,
            failure_budget=cfg.decode_failure_budget,
            trials=cfg.group_trials,
            rng=self.rng["coding"],
            c=cfg.degree_c,
            delta=cfg.degree_delta,
            erasure_fraction=cfg.erasure_fraction,
            max_intermediates=cfg.intermediate_ceiling,
        )

    def _update_reliability(self, plan: AssignmentPlan, votes: np.ndarray, v_star: np.ndarray) -> None:
        if plan.K == 0:
            return
        correct_mask = votes == v_star.astype(np.int8)[:, None]
        ids, inverse = np.unique(plan.members, return_inverse=True)
        inverse = inverse.reshape(-1)
        assigned = np.bincount(inverse, minlength=len(ids))
        correct = np.bincount(inverse, weights=correct_mask.ravel().astype(float), minlength=len(ids))
        self.tracker.update(
            {int(j): int(c) for j, c in zip(ids, correct)},
            {int(j): int(q) for j, q in zip(ids, assigned)},
        )

    def _agree_states(
        self,
        plan: AssignmentPlan,
        selected: List[Transaction],
        votes: np.ndarray,
        v_star: np.ndarray,
        epoch: int,
    ) -> List[Optional[bytes]]:
        """Members that voted propose a state; dishonest ones collude on a forged one."""
        K = plan.K
        if K == 0:
            return []
        honest = np.array([state_code(tx.next_state()) for tx in selected], dtype=np.uint64)
        proposals = np.repeat(honest[:, None], plan.group_size, axis=1)
        present = votes != ABSTAIN

        dishonest_ids = [m.miner_id for m in self.roster.ordered() if m.behavior is Behavior.DISHONEST]
        forged = np.isin(plan.members, dishonest_ids) & v_star[:, None]
        for i in np.flatnonzero(forged.any(axis=1)):
            proposals[i, forged[i]] = forged_state(selected[i].tx_id, epoch)
        return tally_state_updates(v_star, proposals, present)

    @staticmethod
    def _readable(net: NetworkView, miner: MinerState, heights: np.ndarray) -> np.ndarray:
        """Whether ``miner`` can fetch the dependency block of each assigned transaction."""
        if net.fetch_blocks(miner, heights) is not None:
            return np.ones(len(heights), dtype=bool)
        return np.array([net.fetch_blocks(miner, [h]) is not None for h in heights], dtype=bool)

    def _credits(self, plan: AssignmentPlan, votes: np.ndarray, appended: List[int], live: np.ndarray) -> np.ndarray:
        """φ_j: accept votes each live miner cast on appended transactions."""
        credits = np.zeros(len(live), dtype=np.int64)
        if not appended:
            return credits
        rows = np.asarray(appended)
        accepted = plan.members[rows][votes[rows] == ACCEPT]
        positions = np.searchsorted(live, accepted)
        np.add.at(credits, positions, 1)
        return credits

    def _maybe_close_group(self) -> bool:
        st = self.state
        target = st.group_target
        if target is None or len(st.open_blocks) < target.W:
            return False

        group = encode_group_boundary(
            st.open_blocks[: target.W],
            self.roster,
            target,
            self.network,
            len(st.closed),
            self.rng["coding"],
        )
        if group is None:
            st.group_target = self._choose_group(len(self.roster))
            return False

        st.closed.append(group)
        st.open_blocks = st.open_blocks[target.W :]
        for miner in self.roster.ordered():
            miner.raw = st.open_blocks
        st.group_target = None
        return True

    def iter_epochs(self, epochs: int) -> Iterator[EpochRecord]:
        for _ in range(epochs):
            yield self.run_epoch()

    def run(self, epochs: int) -> List[EpochRecord]:
        """Run ``epochs`` epochs and return their records."""
        return list(self.iter_epochs(epochs))
