"""Tests for special functions and rewards."""
import math

import numpy as np
import pytest

from raptorchain.txpool.rewards import compute_rewards
from raptorchain.txpool.special import normal_cdf, normal_quantile, regularized_gamma


def test_gamma_exponential_case():
    """Test P(1, x) = 1 - e^-x."""
    for x in (0.1, 1.0, 7.5):
        P, Q = regularized_gamma(1.0, x)
        assert abs(P - (1 - math.exp(-x))) < 1e-12
        assert abs(P + Q - 1) < 1e-12


def test_gamma_at_zero():
    """Test Q(a, 0) = 1."""
    _, Q = regularized_gamma(3.2, 0.0)
    assert Q == 1.0


def test_gamma_against_sampling(rng):
    """Test P(2.5, 2.5) against the Gamma(2.5, 1) CDF by sampling."""
    P, _ = regularized_gamma(2.5, 2.5)
    empirical = np.mean(rng.gamma(2.5, 1.0, size=1_000_000) <= 2.5)
    assert abs(P - empirical) < 3e-3


def test_gamma_domain():
    """Test domain violations."""
    with pytest.raises(ValueError):
        regularized_gamma(0.0, 1.0)
    with pytest.raises(ValueError):
        regularized_gamma(1.0, -1.0)


def test_normal_functions():
    """Test Φ and its inverse."""
    assert normal_cdf(0.0) == 0.5
    assert abs(normal_quantile(0.5)) < 1e-15
    assert abs(normal_cdf(1.96) - 0.9750) < 5e-4
    for q in (0.01, 0.3, 0.9, 0.999):
        assert abs(normal_cdf(normal_quantile(q)) - q) < 1e-9
    with pytest.raises(ValueError):
        normal_quantile(1.0)


def test_reward_hand_value():
    """Test the two-transaction hand evaluation."""
    r = compute_rewards(np.array([1, 1]), np.array([1, 1]), np.array([0.0, 0.0]))
    assert np.allclose(r, 1.5**-2, atol=1e-4)


def test_reward_bounds_and_monotone_in_fee():
    """Test 0 < r < 1 and increasing fee raises the reward."""
    v = np.array([3, 7, 1])
    a = np.array([2, 5, 9])
    low = compute_rewards(v, a, np.array([0.0, 1.0, 2.0]))
    high = compute_rewards(v, a, np.array([5.0, 1.0, 2.0]))
    assert np.all((low > 0) & (low < 1))
    assert high[0] > low[0]
    assert compute_rewards(v, a, np.array([60.0, 60.0, 60.0])) == pytest.approx(1.0)


def test_reward_priority_shift_with_fee():
    """Test how the young high-vitality transaction fares against the old one."""
    v = np.array([1, 10, 6, 8, 2, 4])
    a = np.array([16, 1, 4, 32, 2, 8])
    r_high = compute_rewards(v, a, np.full(6, 15.0))
    assert r_high[1] > r_high[0]

    # the high-vitality advantage narrows as fees fall
    gaps = []
    for f in (15.0, 5.0, 1.0, 0.0):
        r = compute_rewards(v, a, np.full(6, f))
        gaps.append((1 - r[1]) / (1 - r[0]))
    assert gaps == sorted(gaps)


def test_reward_rejects_bad_input():
    """Test input validation."""
    with pytest.raises(ValueError):
        compute_rewards(np.array([0, 1]), np.array([1, 1]), np.array([0.0, 0.0]))
    with pytest.raises(ValueError):
        compute_rewards(np.array([1]), np.array([1, 1]), np.array([0.0, 0.0]))
