"""Tests for the run and sweep commands and their CSV output."""
import csv
import hashlib
import json
import logging
import math
import os

import numpy as np
import pytest
from click.testing import CliRunner

from raptorchain.cli.commands import main
from raptorchain.cli.export import ResultExporter, format_value
from raptorchain.cli.presets import get_preset
from raptorchain.cli.runner import EPOCH_COLUMNS, SUMMARY_COLUMNS, SWEEP_COLUMNS, run, run_seed, sweep_rows
from raptorchain.metrics import storage_fraction
from raptorchain.utils.logging import resolve_level


def digests(directory):
    result = {}
    for name in sorted(os.listdir(directory)):
        with open(os.path.join(directory, name), "rb") as f:
            result[name] = hashlib.sha256(f.read()).hexdigest()
    return result


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def test_format_value():
    """Test CSV cell formatting."""
    assert format_value(True) == "1"
    assert format_value(0.1234567) == "0.123457"
    assert format_value(7) == "7"
    assert format_value("x") == "x"


def test_exporter_writes_lf(tmp_path):
    """Test that CSV files use LF line endings and a header row."""
    exporter = ResultExporter(str(tmp_path / "out"))
    path = exporter.export_csv([{"a": 1, "b": 0.5}], ["a", "b"], "t.csv")
    with open(path, "rb") as f:
        assert f.read() == b"a,b\n1,0.5\n"


def test_run_writes_one_file_per_seed(tmp_path, small_scenario):
    """Test the files written for two seeds."""
    scenario = small_scenario.with_overrides(seeds=[1, 2], epochs=4)
    paths = run(scenario, str(tmp_path))

    assert sorted(os.listdir(tmp_path)) == ["schema.json", "small_seed1.csv", "small_seed2.csv", "small_summary.csv"]
    assert len(paths) == 3
    rows = read_rows(tmp_path / "small_seed1.csv")
    assert list(rows[0]) == list(EPOCH_COLUMNS)
    assert [int(r["epoch"]) for r in rows] == [1, 2, 3, 4]
    summary = read_rows(tmp_path / "small_summary.csv")
    assert list(summary[0]) == list(SUMMARY_COLUMNS)
    assert [r["seed"] for r in summary] == ["1", "2"]
    with open(tmp_path / "schema.json", encoding="utf-8") as f:
        schema = json.load(f)
    assert set(schema["small_seed<seed>.csv"]) == set(EPOCH_COLUMNS)


def test_cli_run_deterministic(tmp_path, small_scenario):
    """Test byte-identical output for repeated runs of the same scenario."""
    path = tmp_path / "small.scenario"
    path.write_text(small_scenario.with_overrides(epochs=5).to_text())
    runner = CliRunner()

    first = runner.invoke(main, ["run", "--scenario", str(path), "--output-dir", str(tmp_path / "a")])
    second = runner.invoke(main, ["run", "--scenario", str(path), "--output-dir", str(tmp_path / "b")])

    assert first.exit_code == 0, first.output
    assert second.exit_code == 0, second.output
    assert digests(tmp_path / "a") == digests(tmp_path / "b")
    with open(tmp_path / "a" / "small_seed7.csv", "rb") as f:
        assert b"\r\n" not in f.read()


def test_cli_seed_option(tmp_path, small_scenario):
    """Test that --seed replaces the scenario seeds."""
    path = tmp_path / "small.scenario"
    path.write_text(small_scenario.to_text())
    result = CliRunner().invoke(
        main,
        ["run", "--scenario", str(path), "--seed", "3", "--epochs", "2", "--output-dir", str(tmp_path / "out")],
    )
    assert result.exit_code == 0, result.output
    assert "small_seed3.csv" in os.listdir(tmp_path / "out")


def test_cli_rejects_bad_scenario(tmp_path):
    """Test that validation errors exit non-zero with the line number."""
    path = tmp_path / "bad.scenario"
    path.write_text("epochs = -1\n")
    result = CliRunner().invoke(main, ["run", "--scenario", str(path), "--output-dir", str(tmp_path)])
    assert result.exit_code != 0
    assert "line 1" in result.output


def test_cli_rejects_scenario_and_preset(tmp_path):
    """Test that --scenario and --preset are exclusive."""
    path = tmp_path / "s.scenario"
    path.write_text("")
    result = CliRunner().invoke(main, ["run", "--scenario", str(path), "--preset", "fig4"])
    assert result.exit_code == 2


def test_cli_presets_and_show():
    """Test preset listing and scenario display."""
    runner = CliRunner()
    listing = runner.invoke(main, ["presets"])
    assert listing.exit_code == 0
    assert "fig4" in listing.output
    assert "fig9" in listing.output
    shown = runner.invoke(main, ["show-scenario", "--preset", "fig5", "--epochs", "3"])
    assert shown.exit_code == 0
    assert "epochs = 3" in shown.output
    assert "initial_miners = 500" in shown.output


def test_sweep_rows(small_scenario):
    """Test one row per value and seed."""
    rows = sweep_rows(small_scenario.with_overrides(epochs=2, seeds=[1, 2]), "mu", [0.0, 0.2])
    assert [(r["value"], r["seed"]) for r in rows] == [(0.0, 1), (0.0, 2), (0.2, 1), (0.2, 2)]
    assert all(set(r) == set(SWEEP_COLUMNS) for r in rows)
    assert {r["selection_mode"] for r in rows} == {small_scenario.selection_mode}
    with pytest.raises(ValueError):
        sweep_rows(small_scenario, "mu", [])


def test_sweep_rows_paired_modes(small_scenario):
    """Test one series per selection mode, optimized first."""
    rows = sweep_rows(small_scenario.with_overrides(epochs=2), "mu", [0.0, 0.2], modes=["stochastic", "none"])
    assert [(r["selection_mode"], r["value"]) for r in rows] == [
        ("stochastic", 0.0),
        ("stochastic", 0.2),
        ("none", 0.0),
        ("none", 0.2),
    ]
    with pytest.raises(ValueError):
        sweep_rows(small_scenario, "mu", [0.0], modes=["greedy"])


def test_throughput_presets_pair_with_baseline():
    """Test that every throughput sweep preset carries the unoptimized series."""
    for name in ("fig6", "fig7", "fig8", "fig9"):
        assert tuple(get_preset(name).modes) == ("stochastic", "none")
    assert tuple(get_preset("fig4").modes) == ()


def test_cli_sweep(tmp_path, small_scenario):
    """Test the sweep command output."""
    path = tmp_path / "small.scenario"
    path.write_text(small_scenario.with_overrides(epochs=2).to_text())
    result = CliRunner().invoke(
        main,
        ["sweep", "--scenario", str(path), "--axis", "discrepancy", "--values", "1,3", "--output-dir", str(tmp_path / "out")],
    )
    assert result.exit_code == 0, result.output
    rows = read_rows(tmp_path / "out" / "small_sweep.csv")
    assert [r["value"] for r in rows] == ["1", "3"]
    assert rows[0]["throughput"] == rows[1]["throughput"]


def test_cli_sweep_modes(tmp_path, small_scenario):
    """Test that --modes writes one series per selection mode."""
    path = tmp_path / "small.scenario"
    path.write_text(small_scenario.with_overrides(epochs=2).to_text())
    result = CliRunner().invoke(
        main,
        [
            "sweep", "--scenario", str(path), "--axis", "mu", "--values", "0.1",
            "--modes", "stochastic,none", "--output-dir", str(tmp_path / "out"),
        ],
    )
    assert result.exit_code == 0, result.output
    rows = read_rows(tmp_path / "out" / "small_sweep.csv")
    assert [r["selection_mode"] for r in rows] == ["stochastic", "none"]
    assert list(rows[0]) == list(SWEEP_COLUMNS)


def test_reduced_storage_sawtooth():
    """Test R_s drops at every boundary of a smaller fig4-style network."""
    scenario = get_preset("fig4").scenario(
        initial_miners=100, epochs=60, max_intermediates=16, decode_failure_budget=1.0, batch_size=50
    )
    result = run_seed(scenario, 0)
    fractions = [row["storage_fraction"] for row in result.rows]
    closed = [r.epoch for r in result.records if r.group_closed]

    assert fractions[0] == 1
    assert closed == [13, 26, 39, 52]
    assert sum(1 for a, b in zip(fractions, fractions[1:]) if b < a) == 4
    assert fractions[-1] == pytest.approx(0.2)
    for record, value in zip(result.records, fractions):
        assert value == storage_fraction(record.epoch, record.closed_group_sizes)
    assert result.ledger.epochs() == list(range(1, 61))
    assert result.summary["mean_gini"] == pytest.approx(sum(row["gini"] for row in result.rows) / 60)


@pytest.mark.slow
def test_fig4_storage_sawtooth():
    """Test the growing network keeps cutting R_s."""
    result = run_seed(get_preset("fig4").scenario(), 0)
    fractions = [float(row["storage_fraction"]) for row in result.rows]
    assert fractions[0] == 1.0
    assert sum(1 for a, b in zip(fractions, fractions[1:]) if b < a) >= 3
    assert fractions[-1] < 0.5


@pytest.mark.slow
def test_fig5_decentralization():
    """Test low Gini and near-maximal entropy of the participation credits."""
    scenario = get_preset("fig5").scenario(epochs=200)
    result = run_seed(scenario, 0)
    assert result.summary["mean_gini"] < 0.2
    log_n = sum(math.log2(r.miners) for r in result.records) / len(result.records)
    assert result.summary["mean_entropy"] > 0.8 * log_n


@pytest.mark.slow
def test_stragglers_barely_cost_throughput():
    """Test throughput with 40% stragglers against none."""
    base = get_preset("fig9").scenario(dishonest_fraction=0.0, epochs=40)
    values = {cap: run_seed(base.with_overrides(straggler_cap=cap), 0).summary["throughput"] for cap in (0.0, 0.2, 0.4)}
    assert values[0.2] >= 0.9 * values[0.0]
    assert values[0.4] >= 0.9 * values[0.0]


@pytest.mark.slow
def test_throughput_falls_with_dishonest_fraction():
    """Test that throughput collapses once honest and active miners lose the majority."""
    base = get_preset("fig7").scenario(epochs=30)
    values = [
        np.mean([run_seed(base.with_overrides(dishonest_fraction=mu), seed).summary["throughput"] for seed in (0, 1, 2)])
        for mu in (0.05, 0.3, 0.45)
    ]
    assert values[0] >= values[1] > values[2]
    assert values[0] - values[1] < values[1] - values[2]


def test_resolve_level(monkeypatch):
    """Test log level names, numbers and the environment fallback."""
    monkeypatch.setenv("RAPTORCHAIN_LOG_LEVEL", "warning")
    assert resolve_level() == logging.WARNING
    assert resolve_level("debug") == logging.DEBUG
    assert resolve_level("15") == 15
    with pytest.raises(ValueError):
        resolve_level("chatty")


def test_cli_rejects_bad_log_level():
    """Test that an unknown --log-level is a usage error."""
    result = CliRunner().invoke(main, ["--log-level", "chatty", "presets"])
    assert result.exit_code == 2
