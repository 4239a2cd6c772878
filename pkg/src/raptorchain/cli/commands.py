"""Command-line interface."""
import logging
from typing import Optional, Tuple

import click
from dotenv import load_dotenv

from ..exceptions import RaptorChainError
from ..utils.logging import setup_logging
from .presets import get_preset, list_presets
from .runner import run, sweep
from .scenario import Scenario, load_scenario

logger = logging.getLogger(__name__)


def _resolve(scenario_path: Optional[str], preset: Optional[str], seeds: Tuple[int, ...], epochs: Optional[int]) -> Scenario:
    if scenario_path and preset:
        raise click.UsageError("Use either --scenario or --preset, not both")
    overrides = {}
    if seeds:
        overrides["seeds"] = list(seeds)
    if epochs is not None:
        overrides["epochs"] = epochs
    try:
        if scenario_path:
            return load_scenario(scenario_path, **overrides)
        if preset:
            return get_preset(preset).scenario(**overrides)
        return Scenario.from_env(**overrides)
    except (RaptorChainError, ValueError) as e:
        raise click.ClickException(str(e)) from e
    except OSError as e:
        raise click.ClickException(f"Cannot read scenario: {e}") from e


scenario_option = click.option("--scenario", "scenario_path", type=click.Path(dir_okay=False), help="Scenario file")
preset_option = click.option("--preset", help="Named preset (see 'presets')")
seed_option = click.option("--seed", "seeds", type=int, multiple=True, help="Seed; repeat for several runs")
epochs_option = click.option("--epochs", type=int, default=None, help="Override the number of epochs")
output_option = click.option("--output-dir", default=None, help="Directory for the CSV files")


@click.group()
@click.option("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
def main(log_level: Optional[str]) -> None:
    """Simulate a raptor-coded IoT blockchain."""
    load_dotenv()
    try:
        setup_logging(log_level)
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="--log-level") from e


@main.command("run")
@scenario_option
@preset_option
@seed_option
@epochs_option
@output_option
def run_command(
    scenario_path: Optional[str],
    preset: Optional[str],
    seeds: Tuple[int, ...],
    epochs: Optional[int],
    output_dir: Optional[str],
) -> None:
    """Run a scenario and write per-epoch and summary CSV files."""
    scenario = _resolve(scenario_path, preset, seeds, epochs)
    try:
        paths = run(scenario, output_dir)
    except (RaptorChainError, ValueError) as e:
        raise click.ClickException(str(e)) from e
    except OSError as e:
        raise click.ClickException(f"Cannot write results: {e}") from e
    for path in paths:
        click.echo(path)


@main.command("sweep")
@scenario_option
@preset_option
@seed_option
@epochs_option
@output_option
@click.option("--axis", default=None, help="Scenario field to sweep, e.g. initial_miners or mu")
@click.option("--values", "values_text", default=None, help="Comma-separated values")
@click.option("--modes", "modes_text", default=None, help="Comma-separated selection modes, one series each")
def sweep_command(
    scenario_path: Optional[str],
    preset: Optional[str],
    seeds: Tuple[int, ...],
    epochs: Optional[int],
    output_dir: Optional[str],
    axis: Optional[str],
    values_text: Optional[str],
    modes_text: Optional[str],
) -> None:
    """Run one scenario per value of a field and write a combined CSV."""
    scenario = _resolve(scenario_path, preset, seeds, epochs)
    values = [v.strip() for v in values_text.split(",") if v.strip()] if values_text else []
    modes = [m.strip() for m in modes_text.split(",") if m.strip()] if modes_text else []
    if preset and not modes:
        modes = list(get_preset(preset).modes)
    if preset and (axis is None or not values):
        spec = get_preset(preset)
        axis = axis or spec.axis
        values = values or list(spec.values)
    if axis is None:
        raise click.UsageError("--axis is required unless the preset defines one")
    try:
        path = sweep(scenario, axis, values, output_dir, modes or None)
    except (RaptorChainError, ValueError) as e:
        raise click.ClickException(str(e)) from e
    except OSError as e:
        raise click.ClickException(f"Cannot write results: {e}") from e
    click.echo(path)


@main.command("presets")
def presets_command() -> None:
    """List the named presets."""
    for preset in list_presets():
        sweep_text = f" (sweeps {preset.axis})" if preset.axis else ""
        click.echo(f"{preset.name}: {preset.description}{sweep_text}")


@main.command("show-scenario")
@scenario_option
@preset_option
@seed_option
@epochs_option
def show_scenario_command(
    scenario_path: Optional[str],
    preset: Optional[str],
    seeds: Tuple[int, ...],
    epochs: Optional[int],
) -> None:
    """Print the fully resolved scenario."""
    click.echo(_resolve(scenario_path, preset, seeds, epochs).to_text(), nl=False)
