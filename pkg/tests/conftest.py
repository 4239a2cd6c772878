"""Shared fixtures for raptorchain tests."""
import numpy as np
import pytest

from raptorchain.cli.scenario import Scenario


@pytest.fixture
def rng():
    """Seeded random stream."""
    return np.random.default_rng(20240601)


@pytest.fixture
def small_scenario():
    """A tiny static network that runs in well under a second per epoch."""
    return Scenario(
        name="small",
        epochs=12,
        seeds=[7],
        initial_miners=40,
        join_rate=0.0,
        leave_rate=0.0,
        dishonest_fraction=0.1,
        straggler_cap=0.1,
        batch_size=40,
        block_size=4096,
        max_intermediates=16,
        group_trials=10,
    )
