"""Pick the group length (W, W̄) for the next closed group."""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .degree import DegreeDistribution, build_degree_distribution
from .lt import peel_schedule

logger = logging.getLogger(__name__)

FALLBACK_W = 2
FALLBACK_W_BAR = 3
MIN_TRIAL_W_BAR = 3


@dataclass(frozen=True)
class GroupSize:
    """Chosen (W, W̄) and the estimate it was chosen on."""

    W: int
    W_bar: int
    failure_rate: float
    feasible: bool = True


def sources_for(W_bar: int, rate: float) -> int:
    """W = ⌈rate · W̄⌉."""
    return math.ceil(rate * W_bar - 1e-9)


def estimate_failure_rate(
    N: int,
    W: int,
    distribution: DegreeDistribution,
    seeds: np.ndarray,
    erasure_fraction: float = 0.2,
) -> float:
    """Fraction of trials in which fewer than W intermediates peel.

    Each trial lays out W̄ systematic blocks and N - W̄ parity blocks, erases
    ``erasure_fraction`` of all N uniformly, and peels the survivors.
    ``seeds`` fixes one random stream per trial so that different W̄ are
    compared on common random numbers.
    """
    W_bar = distribution.W_bar
    erased = int(round(erasure_fraction * N))
    failures = 0
    for seed in seeds:
        rng = np.random.default_rng(int(seed))
        lost = np.zeros(N, dtype=bool)
        if erased:
            lost[rng.choice(N, size=erased, replace=False)] = True

        sets = [frozenset((j,)) for j in range(W_bar) if not lost[j]]
        parity_kept = np.nonzero(~lost[W_bar:])[0]
        if len(parity_kept):
            degrees = distribution.sample(rng, size=len(parity_kept))
            for degree in degrees:
                sets.append(frozenset(rng.choice(W_bar, size=int(degree), replace=False).tolist()))

        if len(peel_schedule(sets, W_bar)) < W:
            failures += 1
    return failures / len(seeds)


def choose_group_size(
    N: int,
    rate: float = 0.8,
    failure_budget: float = 0.01,
    trials: int = 200,
    rng: Optional[np.random.Generator] = None,
    c: float = 0.15,
    delta: float = 0.5,
    erasure_fraction: float = 0.2,
    max_intermediates: Optional[int] = None,
) -> GroupSize:
    """Largest W̄ < N whose estimated decode failure stays within budget.

    W̄ ranges over [3, min(N - 1, max_intermediates)] restricted to values
    with W = ⌈rate · W̄⌉ < W̄, and is found by bisection on the Monte Carlo
    estimate. When nothing qualifies the minimal group (W=2, W̄=3) is
    returned with ``feasible=False``.
    """
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    if not 0 < rate < 1:
        raise ValueError(f"rate must lie in (0, 1), got {rate}")
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    rng = rng if rng is not None else np.random.default_rng()

    upper = N - 1
    if max_intermediates is not None:
        upper = min(upper, max_intermediates)

    candidates = [w for w in range(MIN_TRIAL_W_BAR, upper + 1) if sources_for(w, rate) < w]
    if not candidates:
        logger.warning(f"No valid group size for N={N}; falling back to (W={FALLBACK_W}, W_bar={FALLBACK_W_BAR})")
        return GroupSize(W=FALLBACK_W, W_bar=FALLBACK_W_BAR, failure_rate=1.0, feasible=False)

    if failure_budget >= 1.0:
        W_bar = candidates[-1]
        return GroupSize(W=sources_for(W_bar, rate), W_bar=W_bar, failure_rate=0.0)

    seeds = rng.integers(0, 2**63 - 1, size=trials)
    estimates = {}

    def failure(index: int) -> float:
        W_bar = candidates[index]
        if W_bar not in estimates:
            estimates[W_bar] = estimate_failure_rate(
                N,
                sources_for(W_bar, rate),
                build_degree_distribution(W_bar, c, delta),
                seeds,
                erasure_fraction,
            )
        return estimates[W_bar]

    if failure(len(candidates) - 1) <= failure_budget:
        best = len(candidates) - 1
    elif failure(0) > failure_budget:
        logger.warning(
            f"Decode failure budget {failure_budget} unreachable for N={N}; "
            f"falling back to (W={FALLBACK_W}, W_bar={FALLBACK_W_BAR})"
        )
        return GroupSize(W=FALLBACK_W, W_bar=FALLBACK_W_BAR, failure_rate=estimates[candidates[0]], feasible=False)
    else:
        lo, hi = 0, len(candidates) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if failure(mid) <= failure_budget:
                lo = mid
            else:
                hi = mid
        best = lo

    W_bar = candidates[best]
    chosen = GroupSize(W=sources_for(W_bar, rate), W_bar=W_bar, failure_rate=estimates[W_bar])
    logger.debug(f"Group size for N={N}: W={chosen.W}, W_bar={chosen.W_bar}, failure={chosen.failure_rate:.4f}")
    return chosen
