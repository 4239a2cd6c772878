"""Configuration for the simulated miner network."""
from typing import Optional

from pydantic import BaseModel, Field, model_validator


class NetworkConfig(BaseModel):
    """Population, behaviour, trust and coding parameters of one network."""

    initial_miners: int = Field(default=500, ge=3, description="Miners at epoch 1 (N0)")
    join_rate: float = Field(default=0.0, ge=0, description="Poisson mean of joins per epoch")
    leave_rate: float = Field(default=0.0, ge=0, description="Poisson mean of leaves per epoch")
    min_miners: int = Field(default=3, ge=3, description="Leaves are truncated to keep at least this many")
    dishonest_fraction: float = Field(default=0.0, ge=0, lt=1, description="Fraction of dishonest miners (mu)")
    straggler_cap: float = Field(default=0.0, ge=0, le=0.4, description="Upper bound on the straggler fraction")
    straggler_silence: float = Field(
        default=1 / 3,
        ge=0,
        le=1,
        description="Per-epoch probability that a straggler stays silent"
    )
    discrepancy: int = Field(
        default=1,
        ge=1,
        description="Distinct conflicting messages a dishonest miner may send; inert for binary votes"
    )
    epsilon: float = Field(default=0.01, gt=0, lt=1, description="Target per-transaction consensus error")
    beta: float = Field(default=0.1, gt=0, lt=1, description="Forgetting factor of the reliability update")

    precode_rate: float = Field(default=0.8, gt=0, lt=1, description="W / W_bar of every group")
    decode_failure_budget: float = Field(
        default=0.01,
        gt=0,
        le=1,
        description="Largest acceptable Monte Carlo decode failure rate when sizing a group"
    )
    group_trials: int = Field(default=40, ge=1, description="Monte Carlo trials per candidate group size")
    erasure_fraction: float = Field(
        default=0.2,
        ge=0,
        lt=1,
        description="Share of coded blocks assumed unreachable in the group-size trials"
    )
    max_intermediates: Optional[int] = Field(
        default=None,
        ge=3,
        description="Ceiling on W_bar; the field size 2^p always applies"
    )
    field_bits: int = Field(default=8, description="Symbol width p, 8 or 16")
    block_size: int = Field(default=20480, ge=64, description="Bytes per serialized block (s)")
    degree_c: float = Field(default=0.15, gt=0, description="Robust soliton constant c")
    degree_delta: float = Field(default=0.5, gt=0, le=1, description="Robust soliton failure parameter delta")
    cache_groups: int = Field(
        default=0,
        ge=0,
        description="Most recent closed groups whose intermediates each miner keeps"
    )

    @model_validator(mode="after")
    def _check_population(self) -> "NetworkConfig":
        if self.dishonest_fraction + self.straggler_cap >= 1:
            raise ValueError("dishonest_fraction + straggler_cap must stay below 1")
        if self.field_bits not in (8, 16):
            raise ValueError("field_bits must be 8 or 16")
        if self.block_size % (self.field_bits // 8):
            raise ValueError("block_size must be a whole number of symbols")
        if self.min_miners > self.initial_miners:
            raise ValueError("min_miners cannot exceed initial_miners")
        return self

    @property
    def intermediate_ceiling(self) -> int:
        ceiling = 1 << self.field_bits
        if self.max_intermediates is not None:
            ceiling = min(ceiling, self.max_intermediates)
        return ceiling
