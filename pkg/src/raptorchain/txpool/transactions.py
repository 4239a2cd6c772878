"""Transactions and the workload that produces them."""
import hashlib
import logging
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .config import WorkloadConfig

logger = logging.getLogger(__name__)

LEDGER_BYTES = 8
STATE_BYTES = 8
CALL_BYTES = 4
PAYLOAD_BYTES = LEDGER_BYTES + STATE_BYTES + CALL_BYTES


@dataclass
class Transaction:
    """One IoT transaction as seen by the base station.

    ``payload`` is the opaque ledger/state/call row: ledger bytes, the prior
    state and the call arguments, in that order.
    """

    tx_id: int
    vitality: int
    age: int
    fee: float
    compute_shape: float
    compute: float
    size_mean: float
    size: float
    depth_mean: float
    depth: int
    valid: bool
    payload: bytes
    submitted_epoch: int

    @property
    def ledger(self) -> bytes:
        return self.payload[:LEDGER_BYTES]

    @property
    def state(self) -> bytes:
        return self.payload[LEDGER_BYTES : LEDGER_BYTES + STATE_BYTES]

    @property
    def call(self) -> bytes:
        return self.payload[LEDGER_BYTES + STATE_BYTES :]

    def next_state(self) -> bytes:
        """State after applying the call; what an honest miner proposes."""
        digest = hashlib.sha256(self.state + self.call + self.tx_id.to_bytes(8, "little")).digest()
        return digest[:STATE_BYTES]

    def dependency_height(self, epoch: int) -> int:
        """Height of the historical block this transaction reads, 0 for none."""
        if self.depth < 1:
            return 0
        return max(0, epoch - self.depth)


class TransactionFactory:
    """Draws fresh transactions with increasing ids."""

    def __init__(self, config: WorkloadConfig, next_id: int = 0):
        """Initialize the factory."""
        self.config = config
        self.next_id = next_id

    def draw(self, count: int, epoch: int, last_height: int, rng: np.random.Generator) -> List[Transaction]:
        """Draw ``count`` transactions submitted at ``epoch``.

        Depth means scale with ``last_height``, the most recent block, so
        every transaction may reach back into the whole chain.
        """
        if count <= 0:
            return []
        cfg = self.config

        vitality = rng.integers(1, cfg.vitality_max + 1, size=count)
        fee = np.clip(rng.exponential(cfg.fee_scale / vitality), 0.0, cfg.fee_cap)
        age = np.clip(np.ceil(rng.exponential(cfg.age_scale / vitality)), 1, cfg.age_cap).astype(int)
        compute = rng.gamma(cfg.compute_shape, cfg.compute_scale, size=count)
        size = np.maximum(rng.normal(cfg.size_mean, cfg.size_std, size=count), 1.0)

        groups = np.arange(count) % cfg.depth_groups
        factors = np.asarray(cfg.depth_factors)[groups]
        depth_mean = last_height * factors
        depth = rng.poisson(depth_mean)

        valid = rng.random(count) < cfg.p_valid
        payload = rng.bytes(PAYLOAD_BYTES * count)

        out = []
        for k in range(count):
            out.append(
                Transaction(
                    tx_id=self.next_id + k,
                    vitality=int(vitality[k]),
                    age=int(age[k]),
                    fee=float(fee[k]),
                    compute_shape=cfg.compute_shape,
                    compute=float(compute[k]),
                    size_mean=cfg.size_mean,
                    size=float(size[k]),
                    depth_mean=float(depth_mean[k]),
                    depth=int(depth[k]),
                    valid=bool(valid[k]),
                    payload=payload[k * PAYLOAD_BYTES : (k + 1) * PAYLOAD_BYTES],
                    submitted_epoch=epoch,
                )
            )
        self.next_id += count
        return out


def attribute_arrays(pool: Sequence[Transaction]) -> dict:
    """Column view of a pool for vectorised selection."""
    return {
        "tx_id": np.array([tx.tx_id for tx in pool], dtype=np.int64),
        "vitality": np.array([tx.vitality for tx in pool], dtype=float),
        "age": np.array([tx.age for tx in pool], dtype=float),
        "fee": np.array([tx.fee for tx in pool], dtype=float),
        "compute_shape": np.array([tx.compute_shape for tx in pool], dtype=float),
        "compute": np.array([tx.compute for tx in pool], dtype=float),
        "size_mean": np.array([tx.size_mean for tx in pool], dtype=float),
        "size": np.array([tx.size for tx in pool], dtype=float),
        "depth_mean": np.array([tx.depth_mean for tx in pool], dtype=float),
        "depth": np.array([tx.depth for tx in pool], dtype=np.int64),
    }
