"""Storage usage of the coded chain."""
from fractions import Fraction
from typing import Iterable


def storage_fraction(height: int, group_sizes: Iterable[int]) -> Fraction:
    """R_s = (Q - sum W_l + L) / Q for L closed groups at chain height Q.

    Each closed group of W_l blocks shrinks to one coded block per miner, so
    the value is exact and equals 1 before the first boundary.
    """
    if height < 1:
        raise ValueError(f"Chain height must be at least 1, got {height}")
    sizes = list(group_sizes)
    if any(w < 1 for w in sizes):
        raise ValueError("Group sizes must be positive")
    if sum(sizes) > height:
        raise ValueError(f"Closed groups cover {sum(sizes)} blocks, more than height {height}")
    return Fraction(height - sum(sizes) + len(sizes), height)
