"""Arithmetic over GF(2^p) with log/antilog tables.

The reduction polynomials are part of the public interface so that coded
payloads are bit-exact across hosts:

    p = 8   ->  0x11D      (x^8 + x^4 + x^3 + x^2 + 1)
    p = 16  ->  0x1100B    (x^16 + x^12 + x^3 + x + 1)

Addition is XOR. Multiplication goes through exp/log tables built from the
generator element 2, which is primitive for both polynomials.
"""
import logging
from functools import lru_cache

import numpy as np

from ..exceptions import FieldError

logger = logging.getLogger(__name__)

POLYNOMIALS = {8: 0x11D, 16: 0x1100B}


class GaloisField:
    """GF(2^p) with vectorised multiplication over numpy symbol arrays."""

    def __init__(self, p: int):
        """Build the exp/log tables for the field."""
        if p not in POLYNOMIALS:
            raise FieldError(f"Unsupported field width p={p}; supported: {sorted(POLYNOMIALS)}")

        self.p = p
        self.order = 1 << p
        self.polynomial = POLYNOMIALS[p]
        self.dtype = np.dtype(np.uint8) if p == 8 else np.dtype("<u2")

        size = self.order - 1
        exp = np.zeros(2 * size, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)

        x = 1
        for i in range(size):
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & self.order:
                x ^= self.polynomial
        if x != 1:
            raise FieldError(f"Polynomial {self.polynomial:#x} is not primitive for p={p}")

        # Doubled so exp[log a + log b] never needs a modulo
        exp[size:] = exp[:size]
        self._exp = exp
        self._log = log

    def check(self, a: int) -> None:
        """Reject values outside the field."""
        if not 0 <= a < self.order:
            raise FieldError(f"{a} is not an element of GF(2^{self.p})")

    def mul(self, a: int, b: int) -> int:
        """Multiply two field elements."""
        self.check(a)
        self.check(b)
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def inv(self, a: int) -> int:
        """Multiplicative inverse of a non-zero element."""
        self.check(a)
        if a == 0:
            raise FieldError("0 has no multiplicative inverse")
        return int(self._exp[(self.order - 1) - self._log[a]])

    def mul_vec(self, scalar: int, vec: np.ndarray) -> np.ndarray:
        """Multiply every symbol of ``vec`` by ``scalar``."""
        if scalar == 0:
            return np.zeros_like(vec)
        if scalar == 1:
            return vec.copy()
        out = self._exp[self._log[vec] + self._log[scalar]].astype(self.dtype)
        out[vec == 0] = 0
        return out

    def mul_outer(self, scalars: np.ndarray, vec: np.ndarray) -> np.ndarray:
        """Row i of the result is ``scalars[i] * vec``."""
        logs = self._log[vec][None, :] + self._log[scalars][:, None]
        out = self._exp[logs].astype(self.dtype)
        out[:, vec == 0] = 0
        out[scalars == 0, :] = 0
        return out

    def invert_matrix(self, matrix: np.ndarray) -> np.ndarray:
        """Gauss-Jordan inverse of a square matrix over the field."""
        n = matrix.shape[0]
        aug = np.zeros((n, 2 * n), dtype=self.dtype)
        aug[:, :n] = matrix
        aug[:, n:] = np.eye(n, dtype=self.dtype)

        for col in range(n):
            pivots = np.nonzero(aug[col:, col])[0]
            if len(pivots) == 0:
                raise FieldError("Matrix is singular over the field")
            pivot = col + int(pivots[0])
            if pivot != col:
                aug[[col, pivot]] = aug[[pivot, col]]

            aug[col] = self.mul_vec(self.inv(int(aug[col, col])), aug[col])
            for row in range(n):
                factor = int(aug[row, col])
                if row != col and factor:
                    aug[row] ^= self.mul_vec(factor, aug[col])

        return aug[:, n:]


@lru_cache(maxsize=None)
def get_field(p: int) -> GaloisField:
    """Shared field instance for width p."""
    return GaloisField(p)


def gf_add(a: int, b: int) -> int:
    """Field addition (and subtraction)."""
    return a ^ b


def gf_mul(a: int, b: int, p: int = 8) -> int:
    """Multiply a and b in GF(2^p)."""
    return get_field(p).mul(a, b)


def gf_inv(a: int, p: int = 8) -> int:
    """Inverse of a in GF(2^p)."""
    return get_field(p).inv(a)
