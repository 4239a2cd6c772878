"""Fixtures for the metrics tests."""
import pytest

from raptorchain.cli.scenario import Scenario
from raptorchain.netsim.engine import Simulation


@pytest.fixture
def make_small_run():
    """Records of a short all-honest run."""

    def build(epochs: int = 6):
        scenario = Scenario(initial_miners=20, batch_size=30, block_size=2048, max_intermediates=8)
        simulation = Simulation(scenario.network(), scenario.workload(), scenario.selection(), seed=2)
        return simulation.run(epochs)

    return build
