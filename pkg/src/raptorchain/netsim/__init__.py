"""Miner network simulation: churn, behaviour, availability and the epoch engine."""

from .availability import ClosedGroup, NetworkView, WorkCounters
from .behavior import draw_silence, forged_state, simulate_votes
from .config import NetworkConfig
from .engine import (
    Batch,
    EpochRecord,
    EpochState,
    Simulation,
    adjust_depth_limit,
    encode_group_boundary,
    generate_transactions,
)
from .miners import Behavior, MinerState, PopulationChange, Roster, initial_roster, step_population

__all__ = [
    "Batch",
    "Behavior",
    "ClosedGroup",
    "EpochRecord",
    "EpochState",
    "MinerState",
    "NetworkConfig",
    "NetworkView",
    "PopulationChange",
    "Roster",
    "Simulation",
    "WorkCounters",
    "adjust_depth_limit",
    "draw_silence",
    "encode_group_boundary",
    "forged_state",
    "generate_transactions",
    "initial_roster",
    "simulate_votes",
    "step_population",
]
