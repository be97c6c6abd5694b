# -*- coding: utf-8 -*-
import numpy as np
import pytest

from setfn.exceptions import ClassificationError, PreconditionError
from setfn.generators import random_norm
from setfn.lattice import (
    lattice_measure,
    lattice_measure_lower,
    lattice_measure_upper,
    lower_ratio,
    lpinfty_embedding_measure,
    nondegeneracy_measure,
    norm_setfunction,
    upper_ratio,
)
from setfn.measures import AtomicMeasure, check_equivalence
from setfn.quasinorm import WeightedLs
from setfn.setfunctions import kp_constant
from setfn.types import Side
from setfn.utils import make_rng


@pytest.fixture
def space(rng):
    return WeightedLs(n=3, s=1.5, weights=rng.uniform(0.2, 2.0, 3))


def unit(spec, f):
    f = np.asarray(f, dtype=float)
    return f / spec(f)


def test_embedding(space):
    cert = lpinfty_embedding_measure(space, 1.0, 2.0, unit(space, np.ones(3)), samples=50, seed=1)
    assert cert.side is Side.EMBEDDING
    assert cert.passed
    assert cert.max_observed_ratio <= 1.0 + 1e-9
    assert cert.extracted_mass >= kp_constant(2.0) - 1e-9


def test_lower_side(space, rng):
    f = unit(space, rng.uniform(0.5, 2.0, 3))
    cert = lattice_measure_lower(space, 1.0, 2.0, f, samples=100, seed=2)
    assert cert.measure.total == pytest.approx(1.0)
    assert cert.constant == pytest.approx(1.0 / kp_constant(2.0))
    assert cert.passed
    assert 0.0 < cert.max_observed_ratio <= cert.constant * (1 + 1e-9)


def test_upper_side(space, rng):
    f = unit(space, rng.uniform(0.5, 2.0, 3))
    cert = lattice_measure_upper(space, 1.0, 2.0, f, samples=100, seed=3)
    assert cert.measure.total == pytest.approx(1.0)
    assert cert.constant == pytest.approx(kp_constant(0.5) ** 0.5)
    assert cert.passed
    assert cert.max_observed_ratio <= cert.constant * (1 + 1e-9)


def test_dispatch_by_side(space):
    f = unit(space, np.ones(3))
    for side in Side:
        cert = lattice_measure(side, space, 1.0, 2.0, f, a=1.0, b=1.0, samples=10)
        assert cert.side is side


def test_ratios_at_f(space):
    # g = f gives g/f = 1 on the support
    f = unit(space, [1.0, 2.0, 0.5])
    cert = lattice_measure_lower(space, 1.0, 2.0, f, samples=1)
    assert lower_ratio(space, f, f, cert.measure, 1.0, 2.0) == pytest.approx(1.0)
    upper = lattice_measure_upper(space, 1.0, 2.0, f, samples=1)
    assert upper_ratio(space, f, f, upper.measure, 1.0, 2.0) == pytest.approx(1.0)


def test_upper_ratio_needs_support(space):
    f = unit(space, [1.0, 1.0, 0.0])
    measure = AtomicMeasure(n=3, weights=[0.5, 0.5, 0.0])
    with pytest.raises(PreconditionError):
        upper_ratio(space, f, np.ones(3), measure, 1.0, 2.0)


def test_preconditions(space):
    with pytest.raises(PreconditionError):
        lattice_measure_lower(space, 1.0, 2.0, np.ones(3) * 10.0)
    with pytest.raises(PreconditionError):
        lattice_measure_lower(space, 1.0, 2.0, -unit(space, np.ones(3)))
    with pytest.raises(PreconditionError):
        lpinfty_embedding_measure(space, 2.0, 1.0, unit(space, np.ones(3)))


def test_inexact_estimates_are_rejected():
    # ℓ_3 has no lower 2-estimate, so ‖fχ_A‖ fails the classification
    spec = WeightedLs(n=3, s=3.0, weights=np.ones(3))
    with pytest.raises(ClassificationError):
        lpinfty_embedding_measure(spec, 1.0, 2.0, unit(spec, np.ones(3)))


def test_nondegeneracy_measure():
    spec = WeightedLs(n=3, s=1.5, weights=[1.0, 0.0, 2.0])
    measure = nondegeneracy_measure(spec, 1.0, 2.0)
    assert measure.weights[1] == 0.0
    assert measure.weights[0] > 0 and measure.weights[2] > 0


def test_nondegeneracy_measure_with_estimated_exponent():
    spec = WeightedLs(n=3, s=1.5, weights=[0.0, 1.0, 2.0])
    measure = nondegeneracy_measure(spec, 1.0)
    assert measure.weights[0] == 0.0
    assert np.all(measure.weights[1:] > 0)
    assert check_equivalence(norm_setfunction(spec, np.ones(3), 1.0), measure)


def test_nondegeneracy_measure_of_null_space():
    spec = WeightedLs(n=2, s=2.0, weights=[0.0, 0.0])
    assert nondegeneracy_measure(spec, 1.0).total == 0.0


@pytest.mark.parametrize("seed", range(6))
def test_nondegeneracy_measure_of_random_specs(seed):
    rng = make_rng(seed, "nondegeneracy")
    spec = random_norm(4, 1.0, 2.0, rng)
    phi = norm_setfunction(spec, np.ones(4), 1.0)
    _, b = spec.crude_constants(1.0, 2.0)
    for measure in (nondegeneracy_measure(spec, 1.0), nondegeneracy_measure(spec, 1.0, 2.0, b)):
        assert check_equivalence(phi, measure)
        assert np.all(measure.weights > 0)
