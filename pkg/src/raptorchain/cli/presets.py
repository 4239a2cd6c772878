"""Named scenarios for the published experiments."""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .scenario import Scenario

# Throughput sweeps run the optimized selection next to the unoptimized baseline.
PAIRED_MODES = ("stochastic", "none")

# Axis aliases accepted by ``sweep`` in addition to plain field names.
AXIS_ALIASES = {
    "N": "initial_miners",
    "mu": "dishonest_fraction",
    "stragglers": "straggler_cap",
    "discrepancy": "discrepancy",
    "attack": "discrepancy",
}


@dataclass(frozen=True)
class Preset:
    """Overrides on top of the defaults and an optional sweep."""

    name: str
    description: str
    overrides: Dict[str, object]
    axis: Optional[str] = None
    values: Sequence[object] = field(default_factory=tuple)
    modes: Sequence[str] = field(default_factory=tuple)

    def scenario(self, **extra) -> Scenario:
        values = {"name": self.name, **self.overrides, **extra}
        return Scenario.from_env(**values)


PRESETS: Dict[str, Preset] = {
    "fig4": Preset(
        name="fig4",
        description="Storage usage fraction in a dynamic network",
        overrides={
            "initial_miners": 1000,
            "leave_rate": 4.0,
            "join_rate": 10.0,
            "epochs": 250,
            "max_intermediates": 64,
        },
    ),
    "fig5": Preset(
        name="fig5",
        description="Gini coefficient and entropy of participation in a fast dynamic network",
        overrides={
            "initial_miners": 500,
            "leave_rate": 10.0,
            "join_rate": 20.0,
            "epochs": 500,
            "dishonest_fraction": 0.1,
            "straggler_cap": 0.1,
            "max_intermediates": 128,
            "block_size": 4096,
        },
    ),
    "fig6": Preset(
        name="fig6",
        description="Throughput versus the number of miners",
        overrides={"epochs": 50, "dishonest_fraction": 0.3, "straggler_cap": 0.4, "max_intermediates": 32},
        axis="initial_miners",
        values=tuple(range(50, 501, 50)),
        modes=PAIRED_MODES,
    ),
    "fig7": Preset(
        name="fig7",
        description="Throughput versus the fraction of dishonest miners",
        overrides={"epochs": 50, "initial_miners": 500, "straggler_cap": 0.4, "max_intermediates": 32},
        axis="dishonest_fraction",
        values=(0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5),
        modes=PAIRED_MODES,
    ),
    "fig8": Preset(
        name="fig8",
        description="Throughput under discrepancy attacks",
        overrides={"epochs": 50, "initial_miners": 500, "dishonest_fraction": 0.2, "max_intermediates": 32},
        axis="discrepancy",
        values=(1, 2, 3),
        modes=PAIRED_MODES,
    ),
    "fig9": Preset(
        name="fig9",
        description="Throughput versus the share of stragglers",
        overrides={"epochs": 50, "initial_miners": 500, "dishonest_fraction": 0.3, "max_intermediates": 32},
        axis="straggler_cap",
        values=(0.0, 0.1, 0.2, 0.3, 0.4),
        modes=PAIRED_MODES,
    ),
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"Unknown preset '{name}'. Available: {', '.join(sorted(PRESETS))}") from None


def resolve_axis(axis: str) -> str:
    """Scenario field behind a sweep axis name."""
    name = AXIS_ALIASES.get(axis, axis)
    if name not in Scenario.model_fields or name in ("name", "seeds", "output_dir", "version"):
        raise ValueError(f"Unknown sweep axis '{axis}'")
    return name


def list_presets() -> List[Preset]:
    return [PRESETS[k] for k in sorted(PRESETS)]
