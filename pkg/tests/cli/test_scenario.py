"""Tests for scenario parsing and presets."""
import pytest

from raptorchain.cli.presets import PRESETS, get_preset, resolve_axis
from raptorchain.cli.scenario import Scenario, load_scenario, parse_scenario
from raptorchain.exceptions import ScenarioError


def test_empty_file_gives_defaults():
    """Test the published defaults for an empty scenario."""
    scenario = parse_scenario("")
    assert scenario.batch_size == 500
    assert scenario.compute_budget == 6.7e6
    assert scenario.size_budget == 1.2e6
    assert scenario.beta == 0.1
    assert scenario.epsilon == 0.01
    assert scenario.degree_c == 0.15
    assert scenario.degree_delta == 0.5
    assert scenario.seeds == [0]


def test_values_comments_and_lists():
    """Test typed values, comments and seed lists."""
    text = """
# network
initial_miners = 120
dishonest_fraction = 0.25   # a quarter
seeds = 3, 4,5
max_intermediates = none
selection_mode = deterministic
"""
    scenario = parse_scenario(text)
    assert scenario.initial_miners == 120
    assert scenario.dishonest_fraction == 0.25
    assert scenario.seeds == [3, 4, 5]
    assert scenario.max_intermediates is None
    assert scenario.selection_mode == "deterministic"


def test_negative_epochs_rejected_with_line():
    """Test that a bad value names its line."""
    with pytest.raises(ScenarioError) as excinfo:
        parse_scenario("name = x\n\nepochs = -1\n")
    assert excinfo.value.line == 3
    assert "line 3" in str(excinfo.value)
    assert "epochs" in str(excinfo.value)


def test_unknown_key_rejected_with_line():
    """Test that unknown keys are rejected."""
    with pytest.raises(ScenarioError) as excinfo:
        parse_scenario("epochs = 5\nminers = 10\n")
    assert excinfo.value.line == 2


def test_population_constraint_rejected():
    """Test the cross-field check on mu and the straggler cap."""
    with pytest.raises(ScenarioError):
        parse_scenario("dishonest_fraction = 0.7\nstraggler_cap = 0.4\n")


def test_scenario_error_is_value_error():
    """Test the error hierarchy."""
    with pytest.raises(ValueError):
        parse_scenario("field_bits = 12\n")


def test_round_trip(small_scenario):
    """Test that serialized scenarios reparse to equal scenarios."""
    assert parse_scenario(small_scenario.to_text()) == small_scenario
    default = Scenario()
    assert parse_scenario(default.to_text()) == default


def test_load_with_overrides(tmp_path, small_scenario):
    """Test reading a file and overriding fields."""
    path = tmp_path / "small.scenario"
    path.write_text(small_scenario.to_text())
    scenario = load_scenario(str(path), seeds=[1, 2], epochs=3)
    assert scenario.seeds == [1, 2]
    assert scenario.epochs == 3
    assert scenario.initial_miners == 40


def test_sub_configs(small_scenario):
    """Test the per-layer views of a scenario."""
    assert small_scenario.network().initial_miners == 40
    assert small_scenario.workload().batch_size == 40
    assert small_scenario.selection().selection_mode == "stochastic"


def test_from_env_output_dir(monkeypatch):
    """Test the output directory override."""
    monkeypatch.setenv("RAPTORCHAIN_OUTPUT_DIR", "/tmp/elsewhere")
    assert Scenario.from_env().output_dir == "/tmp/elsewhere"
    assert Scenario.from_env(output_dir="here").output_dir == "here"


def test_presets_validate():
    """Test that every preset builds a valid scenario."""
    for name, preset in PRESETS.items():
        scenario = preset.scenario()
        assert scenario.name == name
        if preset.axis:
            for value in preset.values:
                scenario.with_overrides(**{preset.axis: value})
    fig4 = get_preset("fig4").scenario()
    assert (fig4.initial_miners, fig4.leave_rate, fig4.join_rate, fig4.epochs) == (1000, 4.0, 10.0, 250)
    with pytest.raises(ValueError):
        get_preset("fig1")


def test_axis_aliases():
    """Test sweep axis names."""
    assert resolve_axis("N") == "initial_miners"
    assert resolve_axis("mu") == "dishonest_fraction"
    assert resolve_axis("straggler_cap") == "straggler_cap"
    assert resolve_axis("attack") == "discrepancy"
    assert resolve_axis("theta") == "theta"
    with pytest.raises(ValueError):
        resolve_axis("colour")
    with pytest.raises(ValueError):
        resolve_axis("seeds")
