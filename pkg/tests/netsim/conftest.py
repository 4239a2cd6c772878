"""Fixtures for the network simulation tests."""
import pytest

from raptorchain.cli.scenario import Scenario
from raptorchain.netsim.engine import Simulation


@pytest.fixture
def make_simulation():
    """Factory for small simulations with a fixed group length.

    A failure budget of 1 skips the Monte Carlo search, so every group has
    W_bar = max_intermediates and W = 8.
    """

    def build(seed: int = 5, record_details: bool = False, **overrides) -> Simulation:
        values = {
            "initial_miners": 30,
            "batch_size": 30,
            "block_size": 2048,
            "max_intermediates": 10,
            "decode_failure_budget": 1.0,
            **overrides,
        }
        scenario = Scenario(**values)
        return Simulation(
            scenario.network(),
            scenario.workload(),
            scenario.selection(),
            seed=seed,
            record_details=record_details,
        )

    return build
