# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest

from setfn.convexity import (
    convexity_bound,
    convexity_ratio,
    coordinate_ascent,
    estimate_concavity,
    estimate_constant,
    estimate_convexity,
    estimate_geo_convexity,
    sharpness_example,
    sharpness_sweep,
)
from setfn.exceptions import PreconditionError
from setfn.quasinorm import LorentzLambda, WeightedLs
from setfn.types import ConvexityKind


@pytest.fixture
def l1():
    return WeightedLs(n=4, s=1.0, weights=np.ones(4))


@pytest.fixture
def quasi():
    return WeightedLs(n=4, s=0.5, weights=np.ones(4))


def test_ratio_kinds(l1, rng):
    family = rng.exponential(size=(3, 4))
    assert convexity_ratio(l1, family, ConvexityKind.CONVEXITY, 1.0) == pytest.approx(1.0)
    assert convexity_ratio(l1, family, ConvexityKind.CONCAVITY, 1.0) == pytest.approx(1.0)
    assert convexity_ratio(l1, family, ConvexityKind.GEOMETRIC) <= 1.0 + 1e-12
    assert convexity_ratio(l1, np.zeros((2, 4)), ConvexityKind.CONVEXITY, 1.0) == 0.0


def test_disjoint_pair_in_quasi_norm(quasi):
    # ‖e_1 + e_2‖_{1/2} = 4 against ‖e_1‖ + ‖e_2‖ = 2
    family = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]]
    assert convexity_ratio(quasi, family, ConvexityKind.CONVEXITY, 1.0) == pytest.approx(2.0)


def test_coordinate_ascent_respects_budget_and_bounds():
    def objective(x):
        return float(np.sum(x))

    value, x, used = coordinate_ascent(objective, np.array([1.0, 1.0]), budget=50, bounds=np.array([3.0, 5.0]))
    assert used <= 50
    assert value == pytest.approx(8.0)
    assert x.tolist() == [3.0, 5.0]
    value, _, used = coordinate_ascent(objective, np.array([1.0, 1.0]), budget=1)
    assert (value, used) == (2.0, 1)


def test_banach_space_estimates(l1):
    estimate = estimate_convexity(l1, 1.0, budget=80, seed=1)
    assert estimate.lower_bound == pytest.approx(1.0)
    assert estimate.budget_used <= 80
    geometric = estimate_geo_convexity(l1, budget=80, seed=1)
    assert geometric.lower_bound == pytest.approx(1.0)


def test_quasi_norm_is_not_convex(quasi):
    estimate = estimate_constant(ConvexityKind.CONVEXITY, quasi, 1.0, budget=200, seed=5)
    assert estimate.lower_bound > 1.0
    assert estimate.reevaluate(quasi) == pytest.approx(estimate.lower_bound, rel=1e-12)
    assert estimate.witness.ndim == 2


def test_estimates_are_seeded(quasi):
    first = estimate_concavity(quasi, 2.0, budget=60, seed=9, workers=2)
    second = estimate_concavity(quasi, 2.0, budget=60, seed=9, workers=2)
    assert first.lower_bound == second.lower_bound
    assert np.array_equal(first.witness, second.witness)
    assert first.workers == 2 and first.budget_used <= 60


def test_estimate_preconditions(l1):
    with pytest.raises(PreconditionError):
        estimate_convexity(l1, 0.0)
    with pytest.raises(PreconditionError):
        estimate_concavity(l1, -1.0)
    with pytest.raises(PreconditionError):
        estimate_geo_convexity(l1, budget=0)


def test_convexity_bound():
    assert convexity_bound(0.0, 1.0, 0.5, 1.0) == pytest.approx(math.exp(0.5 * (1.0 + math.log(2.0))))
    assert convexity_bound(0.5, 1.0, 0.1, 2.0) > 1.0
    for args in ((1.0, 1.0, 0.5, 1.0), (0.0, 1.0, 1.0, 1.0), (0.0, 1.0, 0.5, 0.0)):
        with pytest.raises(PreconditionError):
            convexity_bound(*args)


@pytest.mark.parametrize("theta", [0.2, 0.1, 0.05])
def test_sharpness_norm_below_analytic_bound(theta):
    record = sharpness_example(theta)
    assert record.q == 1.0 + theta
    assert record.psi > 1.0
    assert record.lambda_norm_q <= record.analytic_bound * (1.0 + 1e-3)
    direct = (
        math.exp(record.beta)
        * record.phi
        * record.psi_minus_one ** (-theta / record.q)
        * (-math.log1p(-record.phi)) ** (-1.0 / record.q)
    )
    assert record.kappa_lower == pytest.approx(direct, rel=1e-10)


def test_sharpness_exponent_ratio_increases():
    sweep = sharpness_sweep([0.2, 0.1, 0.05, 1e-3, 1e-30], grid=1000, workers=2)
    ratios = [record.exponent_ratio for record in sweep]
    assert [record.theta for record in sweep] == [0.2, 0.1, 0.05, 1e-3, 1e-30]
    assert np.all(np.diff(ratios) > 0)
    assert ratios[-1] >= 0.8
    # q rounds to 1 here
    assert sweep[-1].q == 1.0
    assert math.isfinite(sweep[-1].lambda_norm)


def test_sharpness_preconditions():
    with pytest.raises(PreconditionError):
        sharpness_example(0.1, grid=999)
    with pytest.raises(PreconditionError):
        sharpness_example(1.0)


def test_lorentz_lambda_is_not_normable():
    spec = LorentzLambda(n=4, p=1.0, q=1.5, weights=np.ones(4))
    # (2, 1) and (1, 2) have norm (1 + 2√2)^{2/3} each, their sum (3, 3) has norm 6
    family = [[2.0, 1.0, 0.0, 0.0], [1.0, 2.0, 0.0, 0.0]]
    expected = 6.0 / (2.0 * (1.0 + 2.0 * math.sqrt(2.0)) ** (2.0 / 3.0))
    assert convexity_ratio(spec, family, ConvexityKind.CONVEXITY, 1.0) == pytest.approx(expected, rel=1e-12)
    estimate = estimate_convexity(spec, 1.0, budget=200, seed=0)
    assert estimate.lower_bound > 1.0


@pytest.mark.parametrize("theta", [0.2, 0.1, 0.05])
def test_near_l1_lorentz_lambda_stays_under_the_bound(theta, rng):
    spec = LorentzLambda(n=4, p=1.0, q=1.0 + theta, weights=rng.uniform(0.2, 2.0, 4))
    bound = convexity_bound(0.0, 1.0, theta, 2.0)
    assert estimate_convexity(spec, 0.5, budget=200, seed=3).lower_bound <= bound
    assert estimate_geo_convexity(spec, budget=200, seed=3).lower_bound <= bound
