"""Tests for the systematic precode."""
import numpy as np
import pytest

from raptorchain.coding.precode import (
    PrecodeMatrix,
    pad_payload,
    precode_encode,
    precode_erasure_decode,
    unpad_payload,
)
from raptorchain.exceptions import FieldError, InsufficientSymbols, SizeOverflow


def _sources(rng, W, s, p=8):
    high = 1 << p
    dtype = np.uint8 if p == 8 else np.dtype("<u2")
    return rng.integers(0, high, size=(W, s)).astype(dtype)


def test_systematic_prefix(rng):
    """Test that the first W intermediates are the inputs."""
    sources = _sources(rng, 4, 16)
    out = precode_encode(sources, PrecodeMatrix(W=4, W_bar=5))
    assert out.shape == (5, 16)
    assert np.array_equal(out[:4], sources)


def test_rate_one_is_identity(rng):
    """Test that W = W̄ passes the inputs through unchanged."""
    sources = _sources(rng, 3, 8)
    assert np.array_equal(precode_encode(sources, PrecodeMatrix(W=3, W_bar=3)), sources)


def test_recover_from_any_four_of_five(rng):
    """Test dropping a source and recovering it from the parity row."""
    sources = _sources(rng, 4, 32)
    code = PrecodeMatrix(W=4, W_bar=5)
    out = precode_encode(sources, code)
    for dropped in range(5):
        present = {i: out[i] for i in range(5) if i != dropped}
        assert np.array_equal(precode_erasure_decode(present, code), sources)


def test_two_erasures(rng):
    """Test recovering two lost sources from a (4, 6) code."""
    sources = _sources(rng, 4, 24)
    code = PrecodeMatrix(W=4, W_bar=6)
    out = precode_encode(sources, code)
    present = {i: out[i] for i in (0, 2, 4, 5)}
    assert np.array_equal(precode_erasure_decode(present, code), sources)


def test_random_subsets(rng):
    """Test decoding from random W-subsets of a (12, 16) code."""
    sources = _sources(rng, 12, 20)
    code = PrecodeMatrix(W=12, W_bar=16)
    out = precode_encode(sources, code)
    for _ in range(20):
        keep = rng.choice(16, size=12, replace=False)
        present = {int(i): out[i] for i in keep}
        assert np.array_equal(precode_erasure_decode(present, code), sources)


def test_too_few_symbols(rng):
    """Test that W - 1 intermediates are not enough."""
    sources = _sources(rng, 4, 8)
    code = PrecodeMatrix(W=4, W_bar=6)
    out = precode_encode(sources, code)
    with pytest.raises(InsufficientSymbols):
        precode_erasure_decode({i: out[i] for i in range(1, 4)}, code)


def test_invalid_shapes():
    """Test validation of group sizes."""
    with pytest.raises(ValueError):
        PrecodeMatrix(W=5, W_bar=4)
    with pytest.raises(FieldError):
        PrecodeMatrix(W=200, W_bar=300, p=8)
    with pytest.raises(FieldError):
        PrecodeMatrix(W=4, W_bar=5, p=4)


def test_gf65536_large_group(rng):
    """Test an (800, 1000) code over GF(2^16)."""
    sources = _sources(rng, 800, 4, p=16)
    code = PrecodeMatrix(W=800, W_bar=1000, p=16)
    out = precode_encode(sources, code)
    keep = rng.choice(1000, size=800, replace=False)
    present = {int(i): out[i] for i in keep}
    assert np.array_equal(precode_erasure_decode(present, code), sources)


def test_padding_round_trip():
    """Test the length prefix and zero fill."""
    vec = pad_payload(b"hello", 16)
    assert vec.shape == (16,)
    assert unpad_payload(vec) == b"hello"
    wide = pad_payload(b"abc", 16, p=16)
    assert wide.shape == (8,)
    assert unpad_payload(wide) == b"abc"


def test_padding_overflow():
    """Test that oversized payloads are rejected."""
    with pytest.raises(SizeOverflow):
        pad_payload(bytes(13), 16)
