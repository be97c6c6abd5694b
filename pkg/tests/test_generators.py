# -*- coding: utf-8 -*-
import numpy as np
import pytest

from setfn.exceptions import PreconditionError, RejectionBudgetError
from setfn.generators import (
    additive_hull,
    monotone_repair,
    random_norm,
    random_operator,
    random_submeasure_lower_p,
    random_supermeasure_upper_p,
    random_weights,
)
from setfn.quasinorm import check_admissible
from setfn.setfunctions import (
    SetFunction,
    classify,
    estimate_exponents,
    satisfies_lower_estimate,
    satisfies_upper_estimate,
)
from setfn.types import Mode, SubmeasureFamily, SupermeasureFamily


def test_random_weights(rng):
    weights = random_weights(6, rng)
    assert weights.sum() == pytest.approx(1.0)
    assert np.all(weights > 0)


def test_repairs():
    values = np.array([0.0, 1.0, 0.5, 0.4])
    repaired = monotone_repair(values)
    assert repaired.tolist() == [0.0, 1.0, 0.5, 1.0]
    assert additive_hull(np.array([0.0, 1.0, 1.0, 3.0]), Mode.MIN).tolist() == [0.0, 1.0, 1.0, 2.0]
    assert additive_hull(np.array([0.0, 1.0, 1.0, 1.5]), Mode.MAX).tolist() == [0.0, 1.0, 1.0, 2.0]


@pytest.mark.parametrize("p", [1.25, 2.0, 3.0])
def test_power_submeasures(p):
    for seed in range(10):
        phi = random_submeasure_lower_p(5, p, seed)
        report = classify(phi)
        assert report.submeasure and report.normalized
        assert report.best_lower_exponent <= p + 1e-8
        assert satisfies_lower_estimate(phi, p)


@pytest.mark.parametrize("p", [0.3, 0.6, 0.9])
def test_power_supermeasures(p):
    for seed in range(10):
        phi = random_supermeasure_upper_p(5, p, seed)
        report = classify(phi)
        assert report.supermeasure and report.normalized
        assert report.best_upper_exponent >= p - 1e-8
        assert satisfies_upper_estimate(phi, p)


def test_mixture_supermeasures_are_always_accepted():
    for seed in range(10):
        phi = random_supermeasure_upper_p(4, 0.5, seed, SupermeasureFamily.MIXTURE, budget=1)
        assert classify(phi).supermeasure
        assert satisfies_upper_estimate(phi, 0.5)


@pytest.mark.parametrize("n", [4, 6])
@pytest.mark.parametrize("family", [SubmeasureFamily.FLOOR, SubmeasureFamily.PERTURB])
def test_rejection_submeasures_are_accepted_and_valid(family, n):
    for seed in range(10):
        phi = random_submeasure_lower_p(n, 1.5, seed, family, budget=500)
        report = classify(phi)
        assert report.monotone and report.submeasure and report.normalized
        assert satisfies_lower_estimate(phi, 1.5)


def test_exhausted_budget_names_the_family(monkeypatch):
    monkeypatch.setattr("setfn.generators.satisfies_lower_estimate", lambda phi, p: False)
    with pytest.raises(RejectionBudgetError) as info:
        random_submeasure_lower_p(4, 1.5, 0, SubmeasureFamily.FLOOR, budget=5)
    assert info.value.family == "floor"
    assert info.value.attempts == 5


def test_generation_is_deterministic():
    first = random_submeasure_lower_p(4, 2.0, 17)
    second = random_submeasure_lower_p(4, 2.0, 17)
    assert np.array_equal(first.values, second.values)
    assert not np.array_equal(first.values, random_submeasure_lower_p(4, 2.0, 18).values)


def test_exponent_range_is_checked():
    with pytest.raises(PreconditionError):
        random_submeasure_lower_p(3, 1.0, 0)
    with pytest.raises(PreconditionError):
        random_supermeasure_upper_p(3, 1.0, 0)


def test_exponents_of_generated_power():
    phi = random_submeasure_lower_p(4, 2.0, 5)
    lower, upper = estimate_exponents(phi)
    # ν^β has both exponents at 1/β
    assert lower == pytest.approx(upper, abs=1e-8)
    assert 1.0 - 1e-8 <= lower <= 2.0 + 1e-8
    assert isinstance(phi, SetFunction)


def test_random_norm_is_admissible(rng):
    for _ in range(5):
        spec = random_norm(4, 1.0, 2.0, rng)
        assert spec.kind in ("weighted-ls", "max-of")
        assert spec.crude_constants(1.0, 2.0) is not None
        assert check_admissible(spec, samples=20).admissible


def test_random_operator(rng):
    operator = random_operator(4, 3, rng)
    assert operator.matrix.shape == (3, 4)
    assert operator.codomain.n == 3
    assert operator.r == 1.0 and operator.q == 2.0
