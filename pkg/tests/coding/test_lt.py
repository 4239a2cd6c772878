"""Tests for the degree distribution and the LT layer."""
import numpy as np
import pytest

from raptorchain.coding.degree import build_degree_distribution
from raptorchain.coding.lt import (
    CodedBlock,
    full_decode,
    lt_encode_parity,
    peel_decode,
    rnm_repair,
    systematic_block,
)
from raptorchain.coding.precode import PrecodeMatrix, precode_encode
from raptorchain.exceptions import IntegrityError


def _intermediates(rng, W_bar, s=8):
    return rng.integers(0, 256, size=(W_bar, s)).astype(np.uint8)


def test_distribution_sums_to_one():
    """Test that Ω is a distribution without degree-1 mass."""
    dist = build_degree_distribution(1000, c=0.15, delta=0.5)
    assert dist.probabilities[1] == 0.0
    assert abs(dist.probabilities.sum() - 1.0) < 1e-9
    assert np.all(dist.probabilities >= 0)


def test_distribution_mode_is_degree_two():
    """Test that degree 2 carries the most mass for W̄=1000."""
    dist = build_degree_distribution(1000, c=0.15, delta=0.5)
    assert int(np.argmax(dist.probabilities)) == 2
    assert dist.spike == round(1000 / dist.spread)


def test_distribution_small_groups():
    """Test tiny groups still produce a valid distribution."""
    for W_bar in (2, 3, 5):
        dist = build_degree_distribution(W_bar)
        assert abs(dist.probabilities.sum() - 1.0) < 1e-9
        assert dist.probabilities[1] == 0.0


def test_distribution_rejects_bad_parameters():
    """Test argument validation."""
    with pytest.raises(ValueError):
        build_degree_distribution(1)
    with pytest.raises(ValueError):
        build_degree_distribution(10, c=0.0)
    with pytest.raises(ValueError):
        build_degree_distribution(10, delta=0.0)


def test_sampled_degrees_within_range(rng):
    """Test that sampled degrees stay in [2, W̄]."""
    dist = build_degree_distribution(50)
    degrees = dist.sample(rng, size=500)
    assert degrees.min() >= 2
    assert degrees.max() <= 50


def test_systematic_block(rng):
    """Test that the degree-1 block carries its intermediate."""
    inter = _intermediates(rng, 6)
    block = systematic_block(inter, 0, owner=3)
    assert block.neighbors == frozenset({0})
    assert block.systematic
    assert np.array_equal(block.payload, inter[0])
    with pytest.raises(ValueError):
        systematic_block(inter, 6)


def test_parity_payload_is_xor(rng):
    """Test that a parity payload XORs its neighbours."""
    inter = _intermediates(rng, 6)
    dist = build_degree_distribution(6)
    block = lt_encode_parity(inter, dist, rng, neighbors=[0, 1])
    assert block.degree == 2
    assert np.array_equal(block.payload, inter[0] ^ inter[1])

    sampled = lt_encode_parity(inter, dist, rng)
    expected = np.bitwise_xor.reduce(inter[sorted(sampled.neighbors)], axis=0)
    assert 2 <= sampled.degree <= 6
    assert np.array_equal(sampled.payload, expected)


def test_parity_rejects_mismatched_distribution(rng):
    """Test that Ω must match the group."""
    with pytest.raises(ValueError):
        lt_encode_parity(_intermediates(rng, 6), build_degree_distribution(7), rng)


def test_repair_from_degree_two_neighbour(rng):
    """Test repairing intermediate 0 from a {0, 1} block and a cached 1."""
    inter = _intermediates(rng, 4)
    dist = build_degree_distribution(4)
    block = lt_encode_parity(inter, dist, rng, owner=9, neighbors=[0, 1])
    value = rnm_repair(
        0,
        directory={9: block.neighbors},
        coded={9: block},
        cache={1: inter[1]},
    )
    assert np.array_equal(value, inter[0])


def test_repair_with_empty_cache(rng):
    """Test that an empty cache succeeds only through the systematic holder."""
    inter = _intermediates(rng, 4)
    dist = build_degree_distribution(4)
    parity = lt_encode_parity(inter, dist, rng, owner=9, neighbors=[0, 1])
    directory = {9: parity.neighbors}
    coded = {9: parity}
    assert rnm_repair(0, directory, coded, cache={}) is None

    holder = systematic_block(inter, 0, owner=2)
    directory[2] = holder.neighbors
    coded[2] = holder
    assert np.array_equal(rnm_repair(0, directory, coded, cache={}), inter[0])


def test_repair_without_holders(rng):
    """Test that a target nobody covers cannot be repaired."""
    inter = _intermediates(rng, 4)
    block = systematic_block(inter, 1, owner=0)
    assert rnm_repair(3, {0: block.neighbors}, {0: block}, {}) is None


def test_peel_with_all_systematic(rng):
    """Test the fast path where every intermediate has a holder."""
    inter = _intermediates(rng, 5)
    blocks = [systematic_block(inter, j, owner=j) for j in range(5)]
    assert np.array_equal(peel_decode(blocks, 5), inter)


def test_peel_through_parity(rng):
    """Test peeling that needs a parity chain."""
    inter = _intermediates(rng, 4)
    dist = build_degree_distribution(4)
    blocks = [
        systematic_block(inter, 0, owner=0),
        lt_encode_parity(inter, dist, rng, owner=1, neighbors=[0, 1]),
        lt_encode_parity(inter, dist, rng, owner=2, neighbors=[1, 2]),
        lt_encode_parity(inter, dist, rng, owner=3, neighbors=[2, 3]),
    ]
    assert np.array_equal(peel_decode(blocks, 4), inter)
    assert np.array_equal(peel_decode(list(reversed(blocks)), 4), inter)


def test_peel_stalls_without_degree_one(rng):
    """Test that peeling cannot start without a ripple."""
    inter = _intermediates(rng, 3)
    dist = build_degree_distribution(3)
    blocks = [
        lt_encode_parity(inter, dist, rng, owner=0, neighbors=[0, 1]),
        lt_encode_parity(inter, dist, rng, owner=1, neighbors=[1, 2]),
    ]
    assert peel_decode(blocks, 3) is None


def test_inconsistent_blocks(rng):
    """Test that equal neighbour sets with different payloads are rejected."""
    inter = _intermediates(rng, 3)
    good = systematic_block(inter, 0, owner=0)
    bad = CodedBlock(owner=1, group=0, neighbors=frozenset({0}), payload=inter[0] ^ 1)
    with pytest.raises(IntegrityError):
        peel_decode([good, bad], 3)


def test_full_decode_uses_precode(rng):
    """Test recovering sources when one systematic intermediate never peels."""
    sources = rng.integers(0, 256, size=(4, 8)).astype(np.uint8)
    code = PrecodeMatrix(W=4, W_bar=5)
    inter = precode_encode(sources, code)
    blocks = [systematic_block(inter, j, owner=j) for j in (0, 2, 3, 4)]
    assert peel_decode(blocks, 5) is None
    assert np.array_equal(full_decode(blocks, code), sources)
    assert full_decode(blocks[:3], code) is None


def test_full_decode_random_layout(rng):
    """Test decoding a network-sized layout with erasures."""
    W, W_bar, N = 16, 20, 120
    sources = rng.integers(0, 256, size=(W, 8)).astype(np.uint8)
    code = PrecodeMatrix(W=W, W_bar=W_bar)
    inter = precode_encode(sources, code)
    dist = build_degree_distribution(W_bar)
    blocks = [systematic_block(inter, j, owner=j) for j in range(W_bar)]
    blocks += [lt_encode_parity(inter, dist, rng, owner=k) for k in range(W_bar, N)]
    survivors = [b for b, keep in zip(blocks, rng.random(N) > 0.2) if keep]
    assert np.array_equal(full_decode(survivors, code), sources)
