"""Scenarios, presets, runs and sweeps."""

from .commands import main
from .presets import PRESETS, Preset, get_preset, resolve_axis
from .runner import run, run_seed, sweep
from .scenario import Scenario, load_scenario, parse_scenario

__all__ = [
    "PRESETS",
    "Preset",
    "Scenario",
    "get_preset",
    "load_scenario",
    "main",
    "parse_scenario",
    "resolve_axis",
    "run",
    "run_seed",
    "sweep",
]
