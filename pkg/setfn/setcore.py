# -*- coding: utf-8 -*-
"""
Ground-set combinatorics: subsets as integer bitmasks (atom i <-> bit i), partition enumeration and the
optimal-partition dynamic programme shared by every other module.
"""
from functools import lru_cache
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import root_validator, validator

from setfn.base import BaseSchema
from setfn.exceptions import InvalidInputError, PreconditionError
from setfn.types import AtomCount, Mode, Subset

BlockScore = Union[Callable[[Subset], float], Sequence[float], np.ndarray]

PAIR_CACHE_MAX_ATOMS = 12


class GroundSet(BaseSchema):
    n: AtomCount
    labels: Optional[Tuple[str, ...]] = None

    @validator("labels")
    def _labels_match(cls, labels, values):
        if labels is not None and "n" in values and len(labels) != values["n"]:
            raise ValueError(f"expected {values['n']} labels, got {len(labels)}")
        return labels

    @property
    def full(self) -> Subset:
        return (1 << self.n) - 1

    @property
    def size(self) -> int:
        return 1 << self.n

    def validate_subset(self, subset: Subset) -> Subset:
        if not 0 <= subset <= self.full:
            raise InvalidInputError(f"subset {subset:#b} is not a subset of a {self.n}-atom ground set")
        return subset

    def label(self, atom: int) -> str:
        return self.labels[atom] if self.labels else str(atom)


class Partition(BaseSchema):
    carrier: Subset
    blocks: Tuple[Subset, ...]

    @root_validator(skip_on_failure=True)
    def _check_blocks(cls, values):
        carrier, blocks = values["carrier"], values["blocks"]
        union = 0
        for block in blocks:
            if block == 0:
                raise ValueError("partition blocks must be nonempty")
            if union & block:
                raise ValueError("partition blocks must be pairwise disjoint")
            union |= block
        if union != carrier:
            raise ValueError(f"blocks cover {union:#b}, carrier is {carrier:#b}")
        values["blocks"] = tuple(sorted(blocks, key=lambda b: b & -b))
        return values

    def __len__(self) -> int:
        return len(self.blocks)


def popcount(mask: Subset) -> int:
    return bin(mask).count("1")


def members(mask: Subset) -> List[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def mask_of(atoms: Sequence[int]) -> Subset:
    mask = 0
    for atom in atoms:
        mask |= 1 << int(atom)
    return mask


@lru_cache(maxsize=4096)
def submasks(mask: Subset) -> np.ndarray:
    """
    All submasks of ``mask`` in ascending order (bit-deposit of 0 .. 2^|mask|-1)
    """
    positions = np.array(members(mask), dtype=np.int64)
    count = np.arange(1 << len(positions), dtype=np.int64)
    bits = (count[:, None] >> np.arange(len(positions), dtype=np.int64)) & 1
    subs = bits @ (np.int64(1) << positions) if len(positions) else np.zeros(1, dtype=np.int64)
    subs.flags.writeable = False
    return subs


@lru_cache(maxsize=16)
def incidence_matrix(n: int) -> np.ndarray:
    """
    Row A-1 holds the indicator vector of the nonempty subset A
    """
    masks = np.arange(1, 1 << n, dtype=np.int64)
    matrix = ((masks[:, None] >> np.arange(n)) & 1).astype(float)
    matrix.flags.writeable = False
    return matrix


def subset_sums(weights: np.ndarray) -> np.ndarray:
    """
    Table of A -> Σ_{i∈A} weights[i] over every subset, empty set included
    """
    weights = np.asarray(weights, dtype=float)
    return np.concatenate(([0.0], incidence_matrix(len(weights)) @ weights))


@lru_cache(maxsize=PAIR_CACHE_MAX_ATOMS + 1)
def _disjoint_pairs(n: int) -> Tuple[np.ndarray, np.ndarray]:
    full = (1 << n) - 1
    lefts, rights = [], []
    for a in range(1, full + 1):
        subs = submasks(full ^ a)
        subs = subs[subs > a]
        lefts.append(np.full(len(subs), a, dtype=np.int64))
        rights.append(subs)
    left, right = np.concatenate(lefts), np.concatenate(rights)
    left.flags.writeable = False
    right.flags.writeable = False
    return left, right


def iter_disjoint_pairs(n: int) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """
    Every unordered pair of disjoint nonempty subsets (A, B), A < B, in array chunks
    """
    if n <= PAIR_CACHE_MAX_ATOMS:
        yield _disjoint_pairs(n)
        return
    full = (1 << n) - 1
    for a in range(1, full + 1):
        subs = submasks(full ^ a)
        subs = subs[subs > a]
        if len(subs):
            yield np.full(len(subs), a, dtype=np.int64), subs


def enumerate_subsets(ground: GroundSet) -> Iterator[Subset]:
    return iter(range(ground.size))


def _partitions(carrier: Subset) -> Iterator[Tuple[Subset, ...]]:
    if carrier == 0:
        yield ()
        return
    low = carrier & -carrier
    rest = carrier ^ low
    for sub in submasks(rest):
        block = low | int(sub)
        for tail in _partitions(carrier ^ block):
            yield (block,) + tail


def enumerate_partitions(carrier: Subset) -> Iterator[Partition]:
    if carrier <= 0:
        raise PreconditionError("cannot enumerate partitions of an empty carrier")
    for blocks in _partitions(carrier):
        yield Partition(carrier=carrier, blocks=blocks)


def partition_table(scores: np.ndarray, mode: Union[Mode, str] = Mode.MAX) -> Tuple[np.ndarray, np.ndarray]:
    """
    Optimal partition values for every subset of a k-atom local ground set.

    ``scores[B]`` is the value of block B (index = local bitmask, ``scores[0]`` ignored). Returns ``(dp, choice)``
    where ``dp[A]`` is the optimum of the block-score sum over partitions of A and ``choice[A]`` the block holding
    the lowest atom of A in an optimal partition.
    """
    mode = Mode(mode)
    size = len(scores)
    dp = np.zeros(size, dtype=float)
    choice = np.zeros(size, dtype=np.int64)
    pick = np.argmax if mode is Mode.MAX else np.argmin
    for a in range(1, size):
        low = a & -a
        blocks = submasks(a ^ low) | low
        candidates = scores[blocks] + dp[a ^ blocks]
        best = int(pick(candidates))
        dp[a] = candidates[best]
        choice[a] = blocks[best]
    return dp, choice


def unwind_partition(choice: np.ndarray, subset: Subset) -> List[Subset]:
    blocks = []
    while subset:
        block = int(choice[subset])
        blocks.append(block)
        subset ^= block
    return blocks


def best_partition(
    carrier: Subset, block_score: BlockScore, mode: Union[Mode, str] = Mode.MAX
) -> Tuple[float, Partition]:
    """
    Optimum of sum(block_score(B) for B in P) over partitions P of ``carrier``.

    ``block_score`` is either a callable on bitmasks or a table indexed by global bitmask.
    """
    if carrier <= 0:
        raise PreconditionError("cannot optimize over partitions of an empty carrier")
    local = submasks(carrier)
    if callable(block_score):
        scores = np.array([0.0] + [float(block_score(int(block))) for block in local[1:]])
    else:
        scores = np.asarray(block_score, dtype=float)[local].copy()
        scores[0] = 0.0
    if not np.all(np.isfinite(scores)):
        raise PreconditionError("block scores must be finite on every nonempty subset of the carrier")
    dp, choice = partition_table(scores, mode)
    blocks = tuple(int(local[block]) for block in unwind_partition(choice, len(local) - 1))
    return float(dp[-1]), Partition(carrier=carrier, blocks=blocks)
