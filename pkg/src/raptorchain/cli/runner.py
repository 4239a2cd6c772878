"""Run scenarios and sweeps and turn their records into CSV tables."""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..metrics import ParticipationLedger, entropy, gini, storage_fraction, throughput
from ..netsim.engine import EpochRecord, Simulation
from .export import ResultExporter
from .presets import resolve_axis
from .scenario import Scenario

logger = logging.getLogger(__name__)

EPOCH_COLUMNS: Dict[str, str] = {
    "epoch": "Epoch t, equal to the chain height after the epoch",
    "miners": "Live miners N(t)",
    "selected": "Transactions selected by the base station, K(t)",
    "confirmed": "Transactions appended to the block",
    "wrong_confirmations": "Appended transactions that are invalid",
    "storage_fraction": "Storage usage fraction R_s",
    "gini": "Gini coefficient of the participation credits",
    "entropy": "Entropy of the participation credits in bits",
    "backlog": "Backlogged transactions after the epoch",
    "depth_limit": "Depth limit D used for selection",
    "M": "Miners required per transaction",
    "reliability": "Aggregate reliability P(t) used for M",
}

SUMMARY_COLUMNS: Dict[str, str] = {
    "seed": "Seed of the run",
    "epochs": "Epochs simulated",
    "mean_miners": "Mean live miners",
    "mean_selected": "Mean selected transactions per epoch",
    "throughput": "Mean transactions confirmed and valid per epoch",
    "normalized_throughput": "throughput divided by the batch size",
    "wrong_confirmations": "Mean invalid transactions confirmed per epoch",
    "final_storage_fraction": "Storage usage fraction after the last epoch",
    "mean_gini": "Mean Gini coefficient over epochs",
    "mean_entropy": "Mean entropy over epochs in bits",
}

SWEEP_COLUMNS: Dict[str, str] = {
    "axis": "Scenario field being swept",
    "value": "Value of the swept field",
    "selection_mode": "Transaction selection mode of the run",
    **SUMMARY_COLUMNS,
}


@dataclass
class RunResult:
    """Records and tables of one seeded run."""

    seed: int
    records: List[EpochRecord]
    rows: List[Dict[str, Any]]
    summary: Dict[str, Any]
    ledger: ParticipationLedger = field(repr=False, default_factory=ParticipationLedger)


def epoch_row(record: EpochRecord) -> Dict[str, Any]:
    """Per-epoch CSV row of a record."""
    return {
        "epoch": record.epoch,
        "miners": record.miners,
        "selected": record.K,
        "confirmed": len(record.confirmed_ids),
        "wrong_confirmations": record.wrong_confirmations,
        "storage_fraction": storage_fraction(record.epoch, record.closed_group_sizes),
        "gini": gini(record.credits),
        "entropy": entropy(record.credits),
        "backlog": record.backlog_out,
        "depth_limit": record.depth_limit,
        "M": record.M,
        "reliability": record.reliability,
    }


def summarize(
    seed: int,
    records: Sequence[EpochRecord],
    rows: Sequence[Dict[str, Any]],
    ledger: ParticipationLedger,
    batch_size: int,
) -> Dict[str, Any]:
    tp = throughput(records, batch_size)
    return {
        "seed": seed,
        "epochs": len(records),
        "mean_miners": float(np.mean([r.miners for r in records])),
        "mean_selected": float(np.mean([r.K for r in records])),
        "throughput": tp.mean,
        "normalized_throughput": tp.normalized,
        "wrong_confirmations": tp.wrong_confirmations,
        "final_storage_fraction": rows[-1]["storage_fraction"],
        "mean_gini": float(np.mean(ledger.gini_series())),
        "mean_entropy": float(np.mean(ledger.entropy_series())),
    }


def run_seed(scenario: Scenario, seed: int) -> RunResult:
    """Simulate one seed of a scenario."""
    simulation = Simulation(scenario.network(), scenario.workload(), scenario.selection(), seed=seed)
    ledger = ParticipationLedger()
    records: List[EpochRecord] = []
    rows: List[Dict[str, Any]] = []
    for record in simulation.iter_epochs(scenario.epochs):
        records.append(record)
        ledger.record(record.epoch, record.credits)
        rows.append(epoch_row(record))
    summary = summarize(seed, records, rows, ledger, scenario.batch_size)
    logger.info(
        f"Run '{scenario.name}' seed {seed} finished: {len(records)} epochs, "
        f"throughput {summary['throughput']:.2f}, final R_s {float(summary['final_storage_fraction']):.3f}"
    )
    return RunResult(seed=seed, records=records, rows=rows, summary=summary, ledger=ledger)


def run(scenario: Scenario, output_dir: Optional[str] = None) -> List[str]:
    """Run every seed and write one per-epoch CSV per seed and a summary CSV."""
    exporter = ResultExporter(output_dir or scenario.output_dir)
    written = []
    summaries = []
    for seed in scenario.seeds:
        result = run_seed(scenario, seed)
        written.append(exporter.export_csv(result.rows, list(EPOCH_COLUMNS), f"{scenario.name}_seed{seed}.csv"))
        summaries.append(result.summary)
    written.append(exporter.export_csv(summaries, list(SUMMARY_COLUMNS), f"{scenario.name}_summary.csv"))
    exporter.export_schema(
        {
            f"{scenario.name}_seed<seed>.csv": EPOCH_COLUMNS,
            f"{scenario.name}_summary.csv": SUMMARY_COLUMNS,
        }
    )
    return written


def sweep_rows(
    scenario: Scenario,
    axis: str,
    values: Sequence[Any],
    modes: Optional[Sequence[str]] = None,
) -> List[Dict[str, Any]]:
    """One summary row per selection mode, value and seed.

    Without ``modes`` the scenario's own selection mode is the only series.
    """
    if not values:
        raise ValueError("A sweep needs at least one value")
    field_name = resolve_axis(axis)
    rows = []
    for mode in modes or [scenario.selection_mode]:
        series = scenario.with_overrides(selection_mode=mode)
        for value in values:
            point = series.with_overrides(**{field_name: value})
            logger.info(f"Sweep '{scenario.name}' ({mode}): {field_name} = {value}")
            for seed in point.seeds:
                result = run_seed(point, seed)
                rows.append(
                    {
                        "axis": field_name,
                        "value": getattr(point, field_name),
                        "selection_mode": point.selection_mode,
                        **result.summary,
                    }
                )
    return rows


def sweep(
    scenario: Scenario,
    axis: str,
    values: Sequence[Any],
    output_dir: Optional[str] = None,
    modes: Optional[Sequence[str]] = None,
) -> str:
    """Run a parameter sweep and write the combined long-format CSV."""
    rows = sweep_rows(scenario, axis, values, modes)
    exporter = ResultExporter(output_dir or scenario.output_dir)
    path = exporter.export_csv(rows, list(SWEEP_COLUMNS), f"{scenario.name}_sweep.csv")
    exporter.export_schema({f"{scenario.name}_sweep.csv": SWEEP_COLUMNS})
    return path
