"""Erasure coding: GF(2^p) precode, LT layer and group sizing."""

from .degree import DegreeDistribution, build_degree_distribution
from .galois import GaloisField, gf_inv, gf_mul, get_field
from .group_size import GroupSize, choose_group_size
from .lt import (
    CodedBlock,
    full_decode,
    lt_encode_parity,
    peel,
    peel_decode,
    rnm_repair,
    systematic_block,
)
from .precode import (
    PrecodeMatrix,
    pad_payload,
    precode_encode,
    precode_erasure_decode,
    unpad_payload,
)

__all__ = [
    "CodedBlock",
    "DegreeDistribution",
    "GaloisField",
    "GroupSize",
    "PrecodeMatrix",
    "build_degree_distribution",
    "choose_group_size",
    "full_decode",
    "get_field",
    "gf_inv",
    "gf_mul",
    "lt_encode_parity",
    "pad_payload",
    "peel",
    "peel_decode",
    "precode_encode",
    "precode_erasure_decode",
    "rnm_repair",
    "systematic_block",
    "unpad_payload",
]
