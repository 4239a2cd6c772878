"""Reliability, assignment, voting and block formation."""

from .assignment import AssignmentPlan, assign_miners
from .blocks import Block, BlockRow, form_block
from .reliability import (
    MinerRequirement,
    ReliabilityTracker,
    aggregate_reliability,
    required_miners,
    update_reliability,
)
from .votes import (
    ABSTAIN,
    ACCEPT,
    REJECT,
    VoteBoard,
    VoteRecord,
    commit_vote,
    reveal_and_verify,
    tally_state_updates,
    tally_transaction_votes,
)

__all__ = [
    "ABSTAIN",
    "ACCEPT",
    "AssignmentPlan",
    "Block",
    "BlockRow",
    "MinerRequirement",
    "REJECT",
    "ReliabilityTracker",
    "VoteBoard",
    "VoteRecord",
    "aggregate_reliability",
    "assign_miners",
    "commit_vote",
    "form_block",
    "required_miners",
    "reveal_and_verify",
    "tally_state_updates",
    "tally_transaction_votes",
    "update_reliability",
]
