"""Block formation and the canonical block serialization.

Layout (little-endian), version 1:

    header   magic b"RCB1" | version u16 | epoch u32 | parent digest 32B | rows u32
    row      tx id u64 | ledger (u16 len + bytes) | state (u16 len + bytes) | call (u16 len + bytes)

The serialized block is carried as one symbol vector of ``block_size`` bytes
(see :func:`raptorchain.coding.precode.pad_payload`).
"""
import hashlib
import logging
import struct
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from ..coding.precode import LENGTH_PREFIX, pad_payload, unpad_payload
from ..exceptions import IntegrityError, SizeOverflow

logger = logging.getLogger(__name__)

MAGIC = b"RCB1"
VERSION = 1
GENESIS_PARENT = bytes(32)

_HEADER = struct.Struct("<4sHI32sI")
_ROW_ID = struct.Struct("<Q")
_LEN = struct.Struct("<H")


@dataclass(frozen=True)
class BlockRow:
    """One confirmed transaction: ledger bytes, consensus state and call."""

    tx_id: int
    ledger: bytes
    state: bytes
    call: bytes


@dataclass(frozen=True)
class Block:
    """One epoch's block."""

    epoch: int
    rows: Tuple[BlockRow, ...]
    parent: bytes = GENESIS_PARENT
    _raw: bytes = field(default=b"", repr=False, compare=False)

    def serialize(self) -> bytes:
        if self._raw:
            return self._raw
        parts = [_HEADER.pack(MAGIC, VERSION, self.epoch, self.parent, len(self.rows))]
        for row in self.rows:
            parts.append(_ROW_ID.pack(row.tx_id))
            for chunk in (row.ledger, row.state, row.call):
                parts.append(_LEN.pack(len(chunk)))
                parts.append(chunk)
        raw = b"".join(parts)
        object.__setattr__(self, "_raw", raw)
        return raw

    @property
    def digest(self) -> bytes:
        return hashlib.sha256(self.serialize()).digest()

    @property
    def tx_ids(self) -> List[int]:
        return [row.tx_id for row in self.rows]

    def to_symbols(self, block_size: int, p: int = 8) -> np.ndarray:
        """Padded symbol vector for the coding layer."""
        return pad_payload(self.serialize(), block_size, p)

    @classmethod
    def from_bytes(cls, raw: bytes) -> "Block":
        """Parse a serialized block."""
        try:
            magic, version, epoch, parent, count = _HEADER.unpack_from(raw)
        except struct.error as e:
            raise IntegrityError(f"Truncated block header: {e}") from e
        if magic != MAGIC or version != VERSION:
            raise IntegrityError(f"Unknown block format {magic!r} v{version}")

        offset = _HEADER.size
        rows = []
        try:
            for _ in range(count):
                (tx_id,) = _ROW_ID.unpack_from(raw, offset)
                offset += _ROW_ID.size
                chunks = []
                for _ in range(3):
                    (length,) = _LEN.unpack_from(raw, offset)
                    offset += _LEN.size
                    chunks.append(raw[offset : offset + length])
                    offset += length
                rows.append(BlockRow(tx_id, *chunks))
        except struct.error as e:
            raise IntegrityError(f"Truncated block body: {e}") from e
        if offset != len(raw):
            raise IntegrityError("Trailing bytes after block body")
        return cls(epoch=epoch, rows=tuple(rows), parent=parent)

    @classmethod
    def from_symbols(cls, vector: np.ndarray) -> "Block":
        return cls.from_bytes(unpad_payload(vector))


def form_block(epoch: int, rows: Sequence[BlockRow], parent: bytes, block_size: int) -> Block:
    """Assemble the epoch's block from consensus rows, ordered by transaction id."""
    if len(parent) != 32:
        raise ValueError("parent digest must be 32 bytes")
    block = Block(epoch=epoch, rows=tuple(sorted(rows, key=lambda r: r.tx_id)), parent=parent)
    size = len(block.serialize()) + LENGTH_PREFIX.size
    if size > block_size:
        raise SizeOverflow(f"Block {epoch} needs {size} bytes, block size is {block_size}")
    return block


def max_rows(block_size: int, row_bytes: int) -> int:
    """How many equal rows fit into one block."""
    return max(0, (block_size - LENGTH_PREFIX.size - _HEADER.size) // row_bytes)
