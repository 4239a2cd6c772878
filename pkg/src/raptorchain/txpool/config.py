"""Configuration for the transaction workload and the selection optimizer."""
from typing import Literal, Tuple

from pydantic import BaseModel, Field, model_validator

SelectionMode = Literal["stochastic", "deterministic", "none"]


class WorkloadConfig(BaseModel):
    """Distributions the base station draws new transactions from."""

    batch_size: int = Field(default=500, ge=1, description="Transactions per epoch batch (n)")
    vitality_max: int = Field(default=10, ge=1, description="Vitality is uniform on 1..vitality_max")
    fee_scale: float = Field(
        default=20.0,
        gt=0,
        description="Fee ~ Exp(mean fee_scale / v), clipped to [0, fee_cap]"
    )
    fee_cap: float = Field(default=100.0, gt=0, description="Upper clip for fees")
    age_scale: float = Field(
        default=6.0,
        gt=0,
        description="Age ~ ceil(Exp(mean age_scale / v)), clipped to [1, age_cap]"
    )
    age_cap: int = Field(default=32, ge=1, description="Upper clip for ages")
    compute_shape: float = Field(default=1.5, gt=0, description="Gamma shape of the compute cost")
    compute_scale: float = Field(default=42000.0, gt=0, description="Gamma scale of the compute cost")
    size_mean: float = Field(default=3000.0, gt=0, description="Mean transaction size in bytes")
    size_std: float = Field(default=1000.0, ge=0, description="Standard deviation of the size")
    depth_base: float = Field(
        default=0.95,
        gt=0,
        description="Depth mean of group k is height * (depth_base - k * depth_step)"
    )
    depth_step: float = Field(default=0.23, ge=0, description="Decrease of the depth factor per group")
    depth_groups: int = Field(default=5, ge=1, description="Number of equally sized depth groups")
    p_valid: float = Field(default=0.9, ge=0, le=1, description="Probability a transaction is valid")
    backlog_ttl: int = Field(
        default=8,
        ge=1,
        description="Epochs a transaction may wait in the backlog before it expires"
    )

    @model_validator(mode="after")
    def _check_depth_factors(self) -> "WorkloadConfig":
        if self.depth_base - (self.depth_groups - 1) * self.depth_step < 0:
            raise ValueError("depth factors must stay non-negative for every group")
        return self

    @property
    def depth_factors(self) -> Tuple[float, ...]:
        return tuple(self.depth_base - k * self.depth_step for k in range(self.depth_groups))


class SelectionProblem(BaseModel):
    """Budgets and floors for one epoch's selection."""

    C: float = Field(gt=0, description="Compute budget")
    S: float = Field(gt=0, description="Size budget of one block in bytes")
    D: int = Field(ge=0, description="Depth limit in blocks")
    q1: float = Field(default=0.9, gt=0, lt=1, description="Floor on P(compute within C)")
    q2: float = Field(default=0.9, gt=0, lt=1, description="Floor on P(size within S)")
    q3: float = Field(default=0.9, gt=0, lt=1, description="Floor on P(all depths within D)")
    theta: float = Field(default=42000.0, gt=0, description="Gamma scale of compute cost")
    omega: float = Field(default=1e6 / 3000, gt=0, description="Size variance per unit of mean size")
    mode: SelectionMode = Field(default="stochastic", description="stochastic, deterministic or none")


class SelectionConfig(BaseModel):
    """Scenario-level selection settings; the depth limit is set per epoch."""

    selection_mode: SelectionMode = Field(
        default="stochastic",
        description="stochastic (chance constraints), deterministic (realized costs) or none"
    )
    compute_budget: float = Field(default=6.7e6, gt=0, description="Compute budget C")
    size_budget: float = Field(default=1.2e6, gt=0, description="Size budget S in bytes")
    q1: float = Field(default=0.9, gt=0, lt=1, description="Compute constraint floor")
    q2: float = Field(default=0.9, gt=0, lt=1, description="Size constraint floor")
    q3: float = Field(default=0.9, gt=0, lt=1, description="Depth constraint floor")
    theta: float = Field(default=42000.0, gt=0, description="Gamma scale seen by the optimizer")
    omega: float = Field(default=1e6 / 3000, gt=0, description="Size variance factor seen by the optimizer")
    rounding_trials: int = Field(
        default=8,
        ge=1,
        description="Independent roundings per epoch; the best feasible one is kept"
    )

    def problem(self, depth_limit: int) -> SelectionProblem:
        """Selection problem for one epoch."""
        return SelectionProblem(
            C=self.compute_budget,
            S=self.size_budget,
            D=depth_limit,
            q1=self.q1,
            q2=self.q2,
            q3=self.q3,
            theta=self.theta,
            omega=self.omega,
            mode=self.selection_mode,
        )
