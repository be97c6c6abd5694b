# -*- coding: utf-8 -*-
import numpy as np
import pytest

from setfn.exceptions import InvalidInputError, PreconditionError
from setfn.setcore import (
    GroundSet,
    best_partition,
    enumerate_partitions,
    enumerate_subsets,
    iter_disjoint_pairs,
    mask_of,
    members,
    popcount,
    subset_sums,
    submasks,
)
from setfn.types import Mode

# Bell numbers
PARTITION_COUNTS = {1: 1, 2: 2, 3: 5, 4: 15, 5: 52}


def test_bit_helpers():
    assert popcount(0b10110) == 3
    assert members(0b10110) == [1, 2, 4]
    assert mask_of([1, 2, 4]) == 0b10110
    assert list(submasks(0b101)) == [0, 1, 4, 5]


def test_ground_set_rejects_foreign_subsets():
    ground = GroundSet(n=3)
    assert ground.full == 0b111
    ground.validate_subset(0b101)
    with pytest.raises(InvalidInputError):
        ground.validate_subset(0b1000)
    assert list(enumerate_subsets(ground)) == list(range(8))


def test_subset_sums():
    table = subset_sums(np.array([1.0, 2.0, 4.0]))
    assert table.tolist() == [float(mask) for mask in range(8)]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_disjoint_pairs_are_complete(n):
    pairs = set()
    for left, right in iter_disjoint_pairs(n):
        assert not np.any(left & right)
        assert np.all(left < right)
        pairs.update(zip(left.tolist(), right.tolist()))
    expected = {(a, b) for a in range(1, 1 << n) for b in range(a + 1, 1 << n) if not a & b}
    assert pairs == expected


@pytest.mark.parametrize("n, count", sorted(PARTITION_COUNTS.items()))
def test_partition_enumeration(n, count):
    carrier = (1 << n) - 1
    partitions = list(enumerate_partitions(carrier))
    assert len(partitions) == count
    assert len({partition.blocks for partition in partitions}) == count
    for partition in partitions:
        union = 0
        for block in partition.blocks:
            assert not union & block
            union |= block
        assert union == carrier


def test_empty_carrier():
    with pytest.raises(PreconditionError):
        list(enumerate_partitions(0))
    with pytest.raises(PreconditionError):
        best_partition(0, lambda block: 1.0)


@pytest.mark.parametrize("mode", [Mode.MAX, Mode.MIN])
def test_best_partition_matches_enumeration(rng, mode):
    scores = rng.uniform(0.0, 3.0, size=1 << 5)
    carrier = 0b11011
    value, partition = best_partition(carrier, scores, mode)
    totals = [sum(scores[block] for block in p.blocks) for p in enumerate_partitions(carrier)]
    expected = max(totals) if mode is Mode.MAX else min(totals)
    assert value == pytest.approx(expected, rel=1e-12)
    assert sum(scores[block] for block in partition.blocks) == pytest.approx(value, rel=1e-12)


def test_best_partition_callable_score():
    # squared block sizes favour the whole carrier
    value, partition = best_partition(0b111, lambda block: popcount(block) ** 2, Mode.MAX)
    assert value == 9.0
    assert partition.blocks == (0b111,)
    value, partition = best_partition(0b111, lambda block: popcount(block) ** 2, Mode.MIN)
    assert value == 3.0
    assert len(partition.blocks) == 3


def test_best_partition_rejects_non_finite_scores():
    with pytest.raises(PreconditionError):
        best_partition(0b11, lambda block: float("inf"))
