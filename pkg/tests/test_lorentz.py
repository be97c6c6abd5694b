# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest
from pydantic import ValidationError

from setfn.exceptions import PreconditionError, TooManyAtomsError, WrongRegimeError
from setfn.lorentz import (
    StepFunction,
    comparison_constants,
    lambda_inf_norm,
    lambda_inf_norm_partition,
    lambda_sup_norm,
    lambda_sup_norm_partition,
    lorentz_norm,
    lp_weak_norm,
    lpq_norm,
    lpq_norm_distribution,
    random_step_function,
    rearrange,
)
from setfn.measures import AtomicMeasure

SUP_PAIRS = [(1.0, 2.0), (0.5, 1.5), (2.0, 3.0), (1.0, 1.5)]
INF_PAIRS = [(2.0, 1.0), (1.5, 0.5), (3.0, 2.0), (1.5, 1.0)]


def test_step_function_validation():
    with pytest.raises(ValidationError):
        StepFunction(steps=[(1.0, 1.0), (2.0, 1.0)])
    with pytest.raises(ValidationError):
        StepFunction(steps=[(1.0, 0.0)])
    with pytest.raises(ValidationError):
        StepFunction(steps=[(-1.0, 1.0)])


def test_step_function_evaluation(two_step):
    assert two_step.breakpoints.tolist() == [0.0, 1.0, 2.0]
    assert two_step.total_mass == 2.0
    assert two_step(0.5) == 2.0
    assert two_step(1.0) == 1.0
    assert two_step(2.5) == 0.0
    assert lpq_norm(two_step.scale(3.0), (1.0, 2.0)) == pytest.approx(3.0 * lpq_norm(two_step, (1.0, 2.0)))


def test_rearrange():
    mu = AtomicMeasure(n=4, weights=[0.1, 0.2, 0.3, 0.4])
    fstar = rearrange([1.0, -3.0, 1.0, 0.0], mu)
    assert fstar.steps == ((3.0, 0.2), (1.0, pytest.approx(0.4)))
    padded = rearrange([1.0, -3.0, 1.0, 0.0], mu, pad_zero=True)
    assert padded.steps[-1] == (0.0, 0.4)
    with pytest.raises(PreconditionError):
        rearrange([1.0, 2.0], mu)


def test_two_step_values(two_step):
    assert lambda_sup_norm(two_step, (1.0, 2.0)) == pytest.approx(math.sqrt(5.0), rel=1e-14)
    assert lpq_norm(two_step, (1.0, 2.0)) == pytest.approx(math.sqrt(7.0), rel=1e-14)
    assert lambda_inf_norm(two_step, (2.0, 1.0)) == pytest.approx(2.0 * math.sqrt(2.0), rel=1e-14)
    assert lpq_norm(two_step, (2.0, 1.0)) == pytest.approx(1.0 + math.sqrt(2.0), rel=1e-14)
    assert lp_weak_norm(two_step, 1.0) == 2.0


def test_empty_step_function():
    empty = StepFunction(steps=[])
    assert lpq_norm(empty, (1.0, 2.0)) == 0.0
    assert lambda_sup_norm(empty, (1.0, 2.0)) == 0.0
    assert lambda_inf_norm(empty, (2.0, 1.0)) == 0.0
    assert lp_weak_norm(empty, 1.0) == 0.0


@pytest.mark.parametrize("seed", range(20))
def test_integral_matches_distribution_formula(seed):
    fstar = random_step_function(seed)
    for prm in SUP_PAIRS + INF_PAIRS + [(1.0, 1.0)]:
        assert lpq_norm(fstar, prm) == pytest.approx(lpq_norm_distribution(fstar, prm), rel=1e-10)


@pytest.mark.parametrize("seed", range(20))
def test_weak_norm_below_strong(seed):
    fstar = random_step_function(seed)
    for p in (0.5, 1.0, 2.0):
        assert lp_weak_norm(fstar, p) <= lpq_norm(fstar, (p, p)) * (1 + 1e-12)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_breakpoint_dp_matches_partitions(rng, n):
    for _ in range(10):
        mu = AtomicMeasure(n=n, weights=rng.uniform(0.1, 1.0, n))
        f = rng.exponential(size=n) * (rng.random(n) > 0.2)
        for prm in SUP_PAIRS:
            dp = lambda_sup_norm(rearrange(f, mu), prm)
            assert dp == pytest.approx(lambda_sup_norm_partition(f, mu, prm), rel=1e-10, abs=1e-12)
        for prm in INF_PAIRS:
            dp = lambda_inf_norm(rearrange(f, mu, pad_zero=True), prm)
            assert dp == pytest.approx(lambda_inf_norm_partition(f, mu, prm), rel=1e-10, abs=1e-12)


def test_partition_forms_are_bounded():
    mu = AtomicMeasure(n=7, weights=np.ones(7))
    with pytest.raises(TooManyAtomsError):
        lambda_sup_norm_partition(np.ones(7), mu, (1.0, 2.0))


def test_regimes_are_enforced(two_step):
    with pytest.raises(WrongRegimeError):
        lambda_sup_norm(two_step, (2.0, 1.0))
    with pytest.raises(WrongRegimeError):
        lambda_inf_norm(two_step, (1.0, 2.0))
    with pytest.raises(WrongRegimeError):
        comparison_constants((1.0, 1.0))
    assert lorentz_norm(two_step, (1.0, 2.0)) == lambda_sup_norm(two_step, (1.0, 2.0))
    assert lorentz_norm(two_step, (2.0, 1.0)) == lambda_inf_norm(two_step, (2.0, 1.0))


def test_comparison_constants_values():
    assert comparison_constants((1.0, 2.0)) == (1.0, pytest.approx(4.0))
    lower, upper = comparison_constants((2.0, 1.0))
    assert upper == 1.0
    assert lower == pytest.approx((2.0**-3) ** 0.5)


@pytest.mark.parametrize("seed", range(30))
def test_lambda_against_integral(seed):
    fstar = random_step_function(seed)
    for prm in SUP_PAIRS:
        lower, upper = comparison_constants(prm)
        lam, integral = lambda_sup_norm(fstar, prm), lpq_norm(fstar, prm)
        assert lower * lam <= integral * (1 + 1e-10)
        assert integral <= upper * lam * (1 + 1e-10)
    for prm in INF_PAIRS:
        lower, _ = comparison_constants(prm)
        lam, integral = lambda_inf_norm(fstar, prm), lpq_norm(fstar, prm)
        assert integral <= lam * (1 + 1e-10)
        assert lower * lam <= integral * (1 + 1e-10)


def test_random_step_function_is_seeded():
    assert random_step_function(3) == random_step_function(3)
    fstar = random_step_function(4, max_steps=3)
    assert 1 <= len(fstar) <= 3
