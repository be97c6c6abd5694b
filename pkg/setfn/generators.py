# -*- coding: utf-8 -*-
"""
Seeded instance generators: set-functions for the extraction experiments, quasi-norms and operators for the lattice
and factorization ones.

Every draw uses its own generator derived from ``(seed, family, attempt)``, so a given seed always yields the same
set-function whatever else ran before it.
"""
from typing import Callable, Optional, Union

import numpy as np
from logzero import logger

from setfn.config import get_settings
from setfn.exceptions import PreconditionError, RejectionBudgetError
from setfn.factorization import OperatorSpec
from setfn.quasinorm import MaxOf, QuasiNormSpec, WeightedLs
from setfn.setcore import GroundSet, partition_table, subset_sums
from setfn.setfunctions import (
    SetFunction,
    is_monotone,
    satisfies_lower_estimate,
    satisfies_upper_estimate,
)
from setfn.types import Mode, SubmeasureFamily, SupermeasureFamily
from setfn.utils import make_rng

NOISE_SCALE = 0.1
MIN_ATOM_WEIGHT = 0.05


def random_weights(n: int, rng: np.random.Generator) -> np.ndarray:
    """Strictly positive atom weights of total mass 1"""
    weights = rng.uniform(MIN_ATOM_WEIGHT, 1.0, size=n)
    return weights / weights.sum()


def power_of_measure(weights: np.ndarray, beta: float) -> SetFunction:
    weights = np.asarray(weights, dtype=float)
    return SetFunction(n=len(weights), values=subset_sums(weights) ** beta)


def monotone_repair(values: np.ndarray) -> np.ndarray:
    """Smallest monotone table above ``values``"""
    values = np.array(values, dtype=float)
    masks = np.arange(len(values), dtype=np.int64)
    n = len(values).bit_length() - 1
    for atom in range(n):
        lower = masks[(masks >> atom) & 1 == 0]
        upper = lower | (1 << atom)
        values[upper] = np.maximum(values[upper], values[lower])
    return values


def additive_hull(values: np.ndarray, mode: Mode) -> np.ndarray:
    """
    mode=min gives the largest subadditive table below ``values``, mode=max the smallest superadditive one above
    """
    table, _ = partition_table(np.asarray(values, dtype=float), mode)
    return table


def _ground(ground: Union[GroundSet, int]) -> GroundSet:
    return ground if isinstance(ground, GroundSet) else GroundSet(n=ground)


def _perturbed(n: int, beta: float, rng: np.random.Generator, mode: Mode) -> np.ndarray:
    values = subset_sums(random_weights(n, rng)) ** beta
    values = values * np.exp(NOISE_SCALE * rng.standard_normal(len(values)))
    values[0] = 0.0
    values = additive_hull(monotone_repair(values), mode)
    return values / values[-1]


def _draw(
    family: str, seed: int, budget: Optional[int], build: Callable[[np.random.Generator], np.ndarray], accept
) -> np.ndarray:
    budget = budget or get_settings().rejection_budget
    for attempt in range(budget):
        values = build(make_rng(seed, family, attempt))
        if accept(values):
            if attempt:
                logger.debug(f"family {family} seed={seed} accepted after {attempt} rejections")
            return values
    raise RejectionBudgetError(family, budget)


def random_submeasure_lower_p(
    ground: Union[GroundSet, int],
    p: float,
    seed: int,
    family: Union[SubmeasureFamily, str] = SubmeasureFamily.POWER,
    budget: Optional[int] = None,
) -> SetFunction:
    """
    Normalized submeasure whose p-th power is superadditive, for p > 1
    """
    if p <= 1:
        raise PreconditionError(f"a submeasure with a lower p-estimate needs p > 1, got {p}")
    n = _ground(ground).n
    family = SubmeasureFamily(family)

    def accept(values: np.ndarray) -> bool:
        phi = SetFunction(n=n, values=values)
        return is_monotone(phi) and satisfies_upper_estimate(phi, 1.0) and satisfies_lower_estimate(phi, p)

    if family is SubmeasureFamily.POWER:

        def build(rng: np.random.Generator) -> np.ndarray:
            return subset_sums(random_weights(n, rng)) ** rng.uniform(1.0 / p, 1.0)

        return SetFunction(n=n, values=_draw(family.value, seed, 1, build, lambda values: True))

    if family is SubmeasureFamily.FLOOR:

        def build(rng: np.random.Generator) -> np.ndarray:
            values = subset_sums(random_weights(n, rng)) ** rng.uniform(1.0 / p, 1.0)
            floor = rng.uniform(0.0, 2.0 ** (-1.0 / p))
            values[1:] = np.maximum(values[1:], floor)
            return values

    else:

        def build(rng: np.random.Generator) -> np.ndarray:
            return _perturbed(n, rng.uniform(1.0 / p, 1.0), rng, Mode.MIN)

    return SetFunction(n=n, values=_draw(family.value, seed, budget, build, accept))


def random_supermeasure_upper_p(
    ground: Union[GroundSet, int],
    p: float,
    seed: int,
    family: Union[SupermeasureFamily, str] = SupermeasureFamily.POWER,
    budget: Optional[int] = None,
) -> SetFunction:
    """
    Normalized supermeasure whose p-th power is subadditive, for 0 < p < 1
    """
    if not 0 < p < 1:
        raise PreconditionError(f"a supermeasure with an upper p-estimate needs 0 < p < 1, got {p}")
    n = _ground(ground).n
    family = SupermeasureFamily(family)

    def accept(values: np.ndarray) -> bool:
        phi = SetFunction(n=n, values=values)
        return is_monotone(phi) and satisfies_lower_estimate(phi, 1.0) and satisfies_upper_estimate(phi, p)

    if family is SupermeasureFamily.POWER:

        def build(rng: np.random.Generator) -> np.ndarray:
            return subset_sums(random_weights(n, rng)) ** rng.uniform(1.0, 1.0 / p)

        return SetFunction(n=n, values=_draw(family.value, seed, 1, build, lambda values: True))

    if family is SupermeasureFamily.MIXTURE:

        def build(rng: np.random.Generator) -> np.ndarray:
            first = subset_sums(random_weights(n, rng)) ** rng.uniform(1.0, 1.0 / p)
            second = subset_sums(random_weights(n, rng)) ** rng.uniform(1.0, 1.0 / p)
            return (first + second) / 2.0

    else:

        def build(rng: np.random.Generator) -> np.ndarray:
            return _perturbed(n, rng.uniform(1.0, 1.0 / p), rng, Mode.MAX)

    return SetFunction(n=n, values=_draw(family.value, seed, budget, build, accept))


def random_norm(n: int, p: float, q: float, rng: np.random.Generator) -> QuasiNormSpec:
    """
    Weighted ℓ_s with p <= s <= q (exact estimates), or the max of two such norms (crude constants (1, 2^{1/q}))
    """

    def weighted() -> WeightedLs:
        return WeightedLs(n=n, s=float(rng.uniform(p, q)), weights=rng.uniform(0.2, 2.0, size=n))

    if rng.random() < 0.5:
        return weighted()
    return MaxOf(n=n, first=weighted(), second=weighted())


def random_operator(n: int, m: int, rng: np.random.Generator) -> OperatorSpec:
    """Sparse gaussian T into ℓ_1, ℓ_2 or a weighted ℓ_s, 1 <= s <= 3, with r = 1 and q = 2"""
    matrix = rng.standard_normal((m, n)) * (rng.random((m, n)) < 0.7)
    choice = int(rng.integers(3))
    if choice == 2:
        codomain = WeightedLs(n=m, s=float(rng.uniform(1.0, 3.0)), weights=rng.uniform(0.5, 2.0, size=m))
    else:
        codomain = WeightedLs(n=m, s=float(choice + 1), weights=np.ones(m))
    return OperatorSpec(matrix=matrix, codomain=codomain, r=1.0, q=2.0)
