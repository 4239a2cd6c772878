"""Scenario files: flat ``key = value`` text validated into one model."""
import io
import logging
import os
import re
from typing import Dict, List

from dotenv import dotenv_values
from pydantic import ConfigDict, Field, ValidationError, field_validator

from ..exceptions import ScenarioError
from ..netsim.config import NetworkConfig
from ..txpool.config import SelectionConfig, WorkloadConfig

logger = logging.getLogger(__name__)

_KEY = re.compile(r"^\s*(?:export\s+)?([A-Za-z_][A-Za-z0-9_]*)\s*=")
_NONE = {"", "none", "null"}


class Scenario(NetworkConfig, WorkloadConfig, SelectionConfig):
    """Everything one deterministic run needs.

    Omitted keys keep their defaults, which are the published simulation
    parameters. Unknown keys are rejected.
    """

    model_config = ConfigDict(extra="forbid")

    version: int = Field(default=1, ge=1, le=1, description="Scenario format version")
    name: str = Field(default="scenario", min_length=1, description="Prefix of every output file")
    epochs: int = Field(default=100, ge=1, description="Epochs per run")
    seeds: List[int] = Field(default_factory=lambda: [0], min_length=1, description="One run per seed")
    output_dir: str = Field(default="results", description="Directory the CSV files are written to")

    @field_validator("seeds", mode="before")
    @classmethod
    def _split_seeds(cls, value):
        if isinstance(value, str):
            return [int(s) for s in value.replace(" ", "").split(",") if s]
        if isinstance(value, int):
            return [value]
        return value

    @field_validator("max_intermediates", mode="before")
    @classmethod
    def _none_marker(cls, value):
        if isinstance(value, str) and value.strip().lower() in _NONE:
            return None
        return value

    @classmethod
    def from_env(cls, **overrides) -> "Scenario":
        """Defaults plus ``RAPTORCHAIN_OUTPUT_DIR`` and explicit overrides."""
        values: Dict[str, object] = {}
        output_dir = os.getenv("RAPTORCHAIN_OUTPUT_DIR")
        if output_dir:
            values["output_dir"] = output_dir
        values.update(overrides)
        return cls(**values)

    def network(self) -> NetworkConfig:
        return NetworkConfig(**self.model_dump(include=set(NetworkConfig.model_fields)))

    def workload(self) -> WorkloadConfig:
        return WorkloadConfig(**self.model_dump(include=set(WorkloadConfig.model_fields)))

    def selection(self) -> SelectionConfig:
        return SelectionConfig(**self.model_dump(include=set(SelectionConfig.model_fields)))

    def with_overrides(self, **changes) -> "Scenario":
        """Validated copy with some fields replaced."""
        values = self.model_dump()
        values.update(changes)
        return Scenario(**values)

    def to_text(self) -> str:
        """Serialize every field so that ``parse_scenario`` rebuilds an equal scenario."""
        lines = [f"# raptorchain scenario v{self.version}"]
        for key, value in self.model_dump().items():
            if value is None:
                text = "none"
            elif isinstance(value, list):
                text = ",".join(str(v) for v in value)
            elif isinstance(value, float):
                text = repr(value)
            else:
                text = str(value)
            lines.append(f"{key} = {text}")
        return "\n".join(lines) + "\n"


def _key_lines(text: str) -> Dict[str, int]:
    lines: Dict[str, int] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        match = _KEY.match(line)
        if match:
            lines.setdefault(match.group(1), number)
    return lines


def parse_scenario(text: str, **overrides) -> Scenario:
    """Parse scenario text.

    Raises:
        ScenarioError: with the line number of the first offending key
    """
    lines = _key_lines(text)
    raw = dotenv_values(stream=io.StringIO(text), interpolate=False)
    for key, value in raw.items():
        if value is None:
            raise ScenarioError(f"'{key}' has no value", lines.get(key))

    values: Dict[str, object] = dict(raw)
    values.update(overrides)
    try:
        return Scenario(**values)
    except ValidationError as e:
        first = e.errors()[0]
        key = str(first["loc"][0]) if first["loc"] else None
        detail = f"{key}: {first['msg']}" if key else first["msg"]
        raise ScenarioError(detail, lines.get(key) if key else None) from e


def load_scenario(path: str, **overrides) -> Scenario:
    """Read and parse a scenario file."""
    with open(path, encoding="utf-8") as f:
        text = f.read()
    scenario = parse_scenario(text, **overrides)
    logger.info(f"Loaded scenario '{scenario.name}' from {path}")
    return scenario
