"""Systematic MDS precode over GF(2^p).

A group of W source symbol vectors is extended to W̄ intermediate vectors.
The first W intermediates are the sources themselves; the remaining W̄ - W
are parity rows built from a Cauchy matrix, so any W of the W̄ intermediates
determine the sources. Indices are 0-based throughout.
"""
import logging
import struct
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np

from ..exceptions import FieldError, InsufficientSymbols, SizeOverflow
from .galois import get_field

logger = logging.getLogger(__name__)

LENGTH_PREFIX = struct.Struct("<I")

SymbolVectors = Union[np.ndarray, Sequence[np.ndarray]]


@dataclass(frozen=True)
class PrecodeMatrix:
    """Generator description for a (W, W̄) Cauchy-systematic code.

    Parity row i, column j carries 1 / (x_i + y_j) with x_i = i and
    y_j = (W̄ - W) + j. Both point sets are disjoint subsets of the field,
    which needs W̄ <= 2^p.
    """

    W: int
    W_bar: int
    p: int = 8

    def __post_init__(self):
        field = get_field(self.p)
        if self.W < 1:
            raise ValueError(f"W must be positive, got {self.W}")
        if self.W_bar < self.W:
            raise ValueError(f"W_bar ({self.W_bar}) must not be smaller than W ({self.W})")
        if self.W_bar > field.order:
            raise FieldError(f"W_bar={self.W_bar} exceeds the field size 2^{self.p}")

    @property
    def parity_count(self) -> int:
        return self.W_bar - self.W

    @property
    def coefficients(self) -> np.ndarray:
        """(W̄ - W) x W Cauchy matrix of parity coefficients."""
        return _cauchy(self.W, self.W_bar, self.p)


_CAUCHY_CACHE: dict = {}


def _cauchy(W: int, W_bar: int, p: int) -> np.ndarray:
    key = (W, W_bar, p)
    if key not in _CAUCHY_CACHE:
        field = get_field(p)
        m = W_bar - W
        matrix = np.zeros((m, W), dtype=field.dtype)
        for i in range(m):
            for j in range(W):
                matrix[i, j] = field.inv(i ^ (m + j))
        _CAUCHY_CACHE[key] = matrix
    return _CAUCHY_CACHE[key]


def _as_matrix(blocks: SymbolVectors, dtype: np.dtype) -> np.ndarray:
    matrix = np.asarray(blocks)
    if matrix.ndim != 2:
        raise ValueError("Expected a sequence of equal-length symbol vectors")
    return matrix.astype(dtype, copy=False)


def precode_encode(blocks: SymbolVectors, code: PrecodeMatrix) -> np.ndarray:
    """Extend W source vectors to W̄ intermediates; rows [0, W) are the sources."""
    field = get_field(code.p)
    sources = _as_matrix(blocks, field.dtype)
    if sources.shape[0] != code.W:
        raise ValueError(f"Expected {code.W} source vectors, got {sources.shape[0]}")
    if np.any(sources >= field.order):
        raise FieldError(f"Symbols out of range for GF(2^{code.p})")

    out = np.zeros((code.W_bar, sources.shape[1]), dtype=field.dtype)
    out[: code.W] = sources
    if code.parity_count == 0:
        return out

    coeffs = code.coefficients
    parity = out[code.W :]
    for j in range(code.W):
        parity ^= field.mul_outer(coeffs[:, j], sources[j])
    return out


def precode_erasure_decode(
    present: Mapping[int, np.ndarray], code: PrecodeMatrix
) -> np.ndarray:
    """Recover the W source vectors from any W distinct intermediates.

    Only the missing source rows are solved for: known sources are
    subtracted from the chosen parity rows, leaving a square Cauchy
    subsystem, which is always invertible.
    """
    field = get_field(code.p)
    for index in present:
        if not 0 <= index < code.W_bar:
            raise ValueError(f"Intermediate index {index} outside [0, {code.W_bar})")
    if len(present) < code.W:
        raise InsufficientSymbols(
            f"Need {code.W} intermediates, only {len(present)} available"
        )

    missing = [j for j in range(code.W) if j not in present]
    known = [j for j in range(code.W) if j in present]
    width = len(next(iter(present.values())))
    sources = np.zeros((code.W, width), dtype=field.dtype)
    for j in known:
        sources[j] = present[j]
    if not missing:
        return sources

    parity_rows = sorted(i for i in present if i >= code.W)[: len(missing)]
    coeffs = code.coefficients
    rows = [r - code.W for r in parity_rows]

    syndromes = np.array([present[r] for r in parity_rows], dtype=field.dtype)
    for j in known:
        syndromes ^= field.mul_outer(coeffs[rows, j], sources[j])

    inverse = field.invert_matrix(coeffs[np.ix_(rows, missing)])
    for k, j in enumerate(missing):
        acc = np.zeros(width, dtype=field.dtype)
        for i in range(len(rows)):
            acc ^= field.mul_vec(int(inverse[k, i]), syndromes[i])
        sources[j] = acc

    logger.debug(f"Recovered {len(missing)} missing sources of a ({code.W}, {code.W_bar}) group")
    return sources


def pad_payload(data: bytes, size: int, p: int = 8) -> np.ndarray:
    """Length-prefix and zero-fill ``data`` to a symbol vector of ``size`` bytes."""
    field = get_field(p)
    if size % field.dtype.itemsize:
        raise ValueError(f"Block size {size} is not a multiple of the symbol width")
    framed = LENGTH_PREFIX.pack(len(data)) + data
    if len(framed) > size:
        raise SizeOverflow(f"Payload of {len(data)} bytes does not fit into {size} bytes")
    buf = framed + bytes(size - len(framed))
    return np.frombuffer(buf, dtype=field.dtype).copy()


def unpad_payload(vector: np.ndarray) -> bytes:
    """Inverse of :func:`pad_payload`."""
    raw = np.ascontiguousarray(vector).tobytes()
    (length,) = LENGTH_PREFIX.unpack_from(raw)
    if length > len(raw) - LENGTH_PREFIX.size:
        raise ValueError("Corrupt length prefix in symbol vector")
    return raw[LENGTH_PREFIX.size : LENGTH_PREFIX.size + length]
