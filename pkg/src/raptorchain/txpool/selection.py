"""Transaction selection: chance constraints, LP relaxation and rounding."""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize, special

from ..exceptions import EmptyFeasible
from .config import SelectionProblem
from .rewards import compute_rewards
from .special import normal_quantile
from .transactions import Transaction, attribute_arrays

logger = logging.getLogger(__name__)

BRUTE_FORCE_LIMIT = 20
BRUTE_FORCE_CHUNK = 1 << 16
FEASIBILITY_TOL = 1e-9


@dataclass
class LinearBudgets:
    """Linear constraints ``costs @ x <= limits`` with per-item upper bounds."""

    costs: np.ndarray
    limits: np.ndarray
    upper: np.ndarray
    names: Tuple[str, ...] = ()

    def feasible(self, x: np.ndarray) -> bool:
        x = np.asarray(x, dtype=float)
        if np.any(x > self.upper + FEASIBILITY_TOL):
            return False
        if len(self.limits) == 0:
            return True
        return bool(np.all(self.costs @ x <= self.limits + FEASIBILITY_TOL * np.maximum(1.0, self.limits)))


@dataclass
class SelectionResult:
    """Outcome of one epoch's selection."""

    selected: List[Transaction]
    mask: np.ndarray
    rewards: np.ndarray
    relaxed: Optional[np.ndarray] = None
    budgets: Optional[LinearBudgets] = field(default=None, repr=False)

    @property
    def K(self) -> int:
        return len(self.selected)


def compute_budget_bound(q1: float, x: float) -> float:
    """A* = sup{a : P(a, x) >= q1}; P is decreasing in a."""
    def gap(a: float) -> float:
        return float(special.gammainc(a, x)) - q1

    lo = 1e-12
    if gap(lo) < 0:
        raise EmptyFeasible(f"Compute floor q1={q1} unreachable for C/theta={x:.6g}")
    hi = max(1.0, 2.0 * x)
    while gap(hi) >= 0:
        hi *= 2.0
    return float(optimize.brentq(gap, lo, hi, xtol=1e-12, rtol=1e-12))


def size_budget_bound(q2: float, S: float, omega: float) -> float:
    """Positive root T* of S - T = z sqrt(omega T) with z = Φ⁻¹(q2)."""
    z = float(normal_quantile(q2))
    b = z * math.sqrt(omega)
    u = (-b + math.sqrt(b * b + 4.0 * S)) / 2.0
    if u <= 0:
        raise EmptyFeasible(f"Size floor q2={q2} unreachable for S={S}")
    return u * u


def depth_costs(D: int, depth_mean: np.ndarray) -> np.ndarray:
    """-ln Q(D+1, λ_j); ``inf`` where the transaction can never meet D."""
    tail = special.gammaincc(D + 1, depth_mean)
    with np.errstate(divide="ignore"):
        return -np.log(tail)


def reduce_stochastic_to_linear(problem: SelectionProblem, pool: Sequence[Transaction]) -> LinearBudgets:
    """Turn the three chance constraints into linear budgets.

    The compute and size constraints depend on the selection only through
    Σα_j and Στ_j, and both are monotone there, so each becomes a single
    bound. The depth constraint is a product of per-item Poisson tails and
    separates into a log-sum.
    """
    cols = attribute_arrays(pool)
    A_star = compute_budget_bound(problem.q1, problem.C / problem.theta)
    T_star = size_budget_bound(problem.q2, problem.S, problem.omega)

    depth = depth_costs(problem.D, cols["depth_mean"])
    reachable = np.isfinite(depth)
    upper = reachable.astype(float)
    depth = np.where(reachable, depth, 0.0)

    return LinearBudgets(
        costs=np.vstack([cols["compute_shape"], cols["size_mean"], depth]),
        limits=np.array([A_star, T_star, -math.log(problem.q3)]),
        upper=upper,
        names=("compute", "size", "depth"),
    )


def deterministic_budgets(problem: SelectionProblem, pool: Sequence[Transaction]) -> LinearBudgets:
    """Realized compute and size against C and S; depth beyond D is excluded."""
    cols = attribute_arrays(pool)
    return LinearBudgets(
        costs=np.vstack([cols["compute"], cols["size"]]),
        limits=np.array([problem.C, problem.S]),
        upper=(cols["depth"] <= problem.D).astype(float),
        names=("compute", "size"),
    )


def build_budgets(problem: SelectionProblem, pool: Sequence[Transaction]) -> LinearBudgets:
    """Budget set for the problem's mode."""
    if problem.mode == "deterministic":
        return deterministic_budgets(problem, pool)
    if problem.mode == "stochastic":
        return reduce_stochastic_to_linear(problem, pool)
    return LinearBudgets(
        costs=np.zeros((0, len(pool))),
        limits=np.zeros(0),
        upper=np.ones(len(pool)),
    )


def solve_relaxed(rewards: np.ndarray, budgets: LinearBudgets) -> np.ndarray:
    """Fractional optimum of max r·x subject to the budgets, 0 <= x <= upper."""
    n = len(rewards)
    if n == 0:
        return np.zeros(0)
    if np.any(budgets.limits < 0):
        raise EmptyFeasible("A budget limit is negative")

    result = optimize.linprog(
        c=-np.asarray(rewards, dtype=float),
        A_ub=budgets.costs if len(budgets.limits) else None,
        b_ub=budgets.limits if len(budgets.limits) else None,
        bounds=list(zip(np.zeros(n), budgets.upper)),
        method="highs",
    )
    if result.status != 0:
        raise EmptyFeasible(f"Relaxed selection failed: {result.message}")
    return np.clip(result.x, 0.0, budgets.upper)


def _normalized_cost(budgets: LinearBudgets) -> np.ndarray:
    if len(budgets.limits) == 0:
        return np.zeros(budgets.costs.shape[1])
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = np.where(
            budgets.limits[:, None] > 0,
            budgets.costs / budgets.limits[:, None],
            np.where(budgets.costs > 0, np.inf, 0.0),
        )
    return scaled.sum(axis=0)


def repair(mask: np.ndarray, budgets: LinearBudgets, rewards: np.ndarray, tx_ids: np.ndarray) -> np.ndarray:
    """Drop the worst reward per normalized cost until every budget holds.

    Ties go to the lowest transaction id.
    """
    mask = mask.copy()
    mask[budgets.upper <= 0] = False
    norm = _normalized_cost(budgets)
    with np.errstate(divide="ignore"):
        density = np.where(norm > 0, rewards / norm, np.inf)

    while not budgets.feasible(mask):
        chosen = np.nonzero(mask)[0]
        order = np.lexsort((tx_ids[chosen], density[chosen]))
        mask[chosen[order[0]]] = False
    return mask


def fill_greedy(mask: np.ndarray, budgets: LinearBudgets, rewards: np.ndarray, tx_ids: np.ndarray) -> np.ndarray:
    """Add left-out items by decreasing reward density while budgets hold."""
    mask = mask.copy()
    norm = _normalized_cost(budgets)
    with np.errstate(divide="ignore"):
        density = np.where(norm > 0, rewards / norm, np.inf)
    slack = budgets.limits + FEASIBILITY_TOL * np.maximum(1.0, budgets.limits)
    totals = budgets.costs @ mask.astype(float)
    spare = np.nonzero(~mask & (budgets.upper > 0))[0]
    for j in spare[np.lexsort((tx_ids[spare], -density[spare]))]:
        if np.all(totals + budgets.costs[:, j] <= slack):
            mask[j] = True
            totals = totals + budgets.costs[:, j]
    return mask


def randomized_round(
    x: np.ndarray,
    budgets: LinearBudgets,
    rewards: np.ndarray,
    rng: np.random.Generator,
    tx_ids: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Set each item with probability x_j, then repair to feasibility."""
    x = np.asarray(x, dtype=float)
    if tx_ids is None:
        tx_ids = np.arange(len(x))
    mask = rng.random(len(x)) < x
    return repair(mask, budgets, np.asarray(rewards, dtype=float), np.asarray(tx_ids))


def brute_force_select(pool: Sequence[Transaction], problem: SelectionProblem) -> np.ndarray:
    """Exact optimum by enumerating every subset; for n <= 20 only."""
    n = len(pool)
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"Brute force limited to {BRUTE_FORCE_LIMIT} transactions, got {n}")
    if n == 0:
        return np.zeros(0, dtype=bool)

    cols = attribute_arrays(pool)
    rewards = compute_rewards(cols["vitality"], cols["age"], cols["fee"])
    budgets = build_budgets(problem, pool)

    slack = budgets.limits + FEASIBILITY_TOL * np.maximum(1.0, budgets.limits)
    best_code, best_value = 0, -np.inf
    for start in range(0, 2**n, BRUTE_FORCE_CHUNK):
        codes = np.arange(start, min(start + BRUTE_FORCE_CHUNK, 2**n))
        subsets = ((codes[:, None] >> np.arange(n)) & 1).astype(float)
        ok = np.all(subsets <= budgets.upper, axis=1)
        if len(budgets.limits):
            ok &= np.all(subsets @ budgets.costs.T <= slack, axis=1)
        values = np.where(ok, subsets @ rewards, -np.inf)
        k = int(np.argmax(values))
        if values[k] > best_value:
            best_code, best_value = int(codes[k]), float(values[k])
    return ((best_code >> np.arange(n)) & 1).astype(bool)


def select_transactions(
    pool: Sequence[Transaction],
    problem: SelectionProblem,
    rng: np.random.Generator,
    rounding_trials: int = 1,
) -> SelectionResult:
    """Pick this epoch's transactions.

    Returns an empty selection when the budgets leave nothing feasible.
    Aging of the unselected remainder is left to the caller, which owns the
    backlog.
    """
    n = len(pool)
    cols = attribute_arrays(pool)
    rewards = compute_rewards(cols["vitality"], cols["age"], cols["fee"]) if n else np.zeros(0)

    if problem.mode == "none":
        mask = np.ones(n, dtype=bool)
        return SelectionResult(selected=list(pool), mask=mask, rewards=rewards)

    try:
        budgets = build_budgets(problem, pool)
        relaxed = solve_relaxed(rewards, budgets)
    except EmptyFeasible as e:
        logger.warning(f"Empty selection: {e}")
        return SelectionResult(selected=[], mask=np.zeros(n, dtype=bool), rewards=rewards)

    best = None
    best_value = -1.0
    for _ in range(rounding_trials):
        mask = randomized_round(relaxed, budgets, rewards, rng, cols["tx_id"])
        mask = fill_greedy(mask, budgets, rewards, cols["tx_id"])
        value = float(rewards[mask].sum())
        if value > best_value:
            best, best_value = mask, value

    selected = [tx for tx, keep in zip(pool, best) if keep]
    logger.debug(f"Selected {len(selected)} of {n} transactions (reward {best_value:.4f})")
    return SelectionResult(selected=selected, mask=best, rewards=rewards, relaxed=relaxed, budgets=budgets)
