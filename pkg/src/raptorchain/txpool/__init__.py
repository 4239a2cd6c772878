"""Transaction generation, rewards and selection."""

from .config import SelectionConfig, SelectionProblem, WorkloadConfig
from .rewards import compute_rewards
from .selection import (
    LinearBudgets,
    SelectionResult,
    brute_force_select,
    build_budgets,
    randomized_round,
    reduce_stochastic_to_linear,
    select_transactions,
    solve_relaxed,
)
from .special import normal_cdf, normal_quantile, regularized_gamma
from .transactions import Transaction, TransactionFactory

__all__ = [
    "LinearBudgets",
    "SelectionConfig",
    "SelectionProblem",
    "SelectionResult",
    "Transaction",
    "TransactionFactory",
    "WorkloadConfig",
    "brute_force_select",
    "build_budgets",
    "compute_rewards",
    "normal_cdf",
    "normal_quantile",
    "randomized_round",
    "reduce_stochastic_to_linear",
    "regularized_gamma",
    "select_transactions",
    "solve_relaxed",
]
