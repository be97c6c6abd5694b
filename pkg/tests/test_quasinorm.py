# -*- coding: utf-8 -*-
import numpy as np
import pytest
from pydantic import ValidationError

from setfn.exceptions import InvalidInputError, PreconditionError, WrongRegimeError
from setfn.generators import random_norm
from setfn.quasinorm import (
    LorentzIntegral,
    LorentzLambda,
    MaxOf,
    RenormV,
    RenormW,
    Scaled,
    WeakLp,
    WeightedLs,
    check_admissible,
    eval_norm,
    parse_spec,
    random_vector,
    renorm,
    verify_renorm,
)
from setfn.setcore import enumerate_partitions, members


def test_parse_by_kind():
    spec = parse_spec({"kind": "weighted-ls", "n": 3, "s": 2.0, "weights": [1.0, 1.0, 1.0]})
    assert isinstance(spec, WeightedLs)
    assert spec([3.0, -4.0, 0.0]) == pytest.approx(5.0)
    first = {"kind": "weighted-ls", "n": 2, "s": 1.0, "weights": [1.0, 1.0]}
    inner = {"kind": "weighted-ls", "n": 2, "s": 2.0, "weights": [1.0, 0.0]}
    second = {"kind": "scaled", "n": 2, "c": 2.0, "inner": inner}
    nested = parse_spec({"kind": "max-of", "n": 2, "first": first, "second": second})
    assert isinstance(nested, MaxOf) and isinstance(nested.second, Scaled)
    assert nested([1.0, 1.0]) == pytest.approx(2.0)
    assert nested.null_atoms().tolist() == [False, False]


def test_parse_errors():
    with pytest.raises(InvalidInputError):
        parse_spec({"n": 2})
    with pytest.raises(InvalidInputError):
        parse_spec({"kind": "sobolev", "n": 2})
    with pytest.raises(ValidationError):
        parse_spec({"kind": "weighted-ls", "n": 2, "s": 1.0, "weights": [1.0]})
    with pytest.raises(ValidationError):
        parse_spec({"kind": "lorentz-lambda", "n": 2, "p": 1.0, "q": 1.0, "weights": [1.0, 1.0]})
    with pytest.raises(ValidationError):
        parse_spec(
            {"kind": "scaled", "n": 3, "c": 1.0, "inner": {"kind": "weighted-ls", "n": 2, "s": 1.0, "weights": [1, 1]}}
        )


def test_dimension_is_checked():
    spec = WeightedLs(n=2, s=1.0, weights=[1.0, 1.0])
    with pytest.raises(PreconditionError):
        spec([1.0, 2.0, 3.0])


def test_subset_table(rng):
    spec = WeightedLs(n=3, s=1.5, weights=[1.0, 2.0, 0.5])
    f = rng.exponential(size=3)
    table = spec.subset_table(f)
    for subset in range(8):
        mask = np.array([subset >> i & 1 for i in range(3)], dtype=float)
        assert table[subset] == pytest.approx(spec(f * mask), rel=1e-12)


def test_lorentz_lambda_spec_on_indicators():
    # ‖χ_A‖ = μ(A)^{1/p} in both regimes
    weights = np.array([0.2, 0.3, 0.5])
    for p, q in ((1.0, 2.0), (2.0, 1.0)):
        spec = LorentzLambda(n=3, p=p, q=q, weights=weights)
        assert spec(np.ones(3)) == pytest.approx(1.0)
        assert spec([1.0, 0.0, 1.0]) == pytest.approx(0.7 ** (1.0 / p))


def test_integral_and_weak_specs_on_indicators():
    weights = [0.2, 0.3, 0.5]
    integral = parse_spec({"kind": "lorentz-integral", "n": 3, "p": 1.0, "q": 2.0, "weights": weights})
    weak = parse_spec({"kind": "weak-lp", "n": 3, "p": 2.0, "weights": weights})
    assert isinstance(integral, LorentzIntegral) and isinstance(weak, WeakLp)
    assert eval_norm(integral, [1.0, 0.0, 1.0]) == pytest.approx(0.7)
    assert eval_norm(weak, [1.0, 1.0, 0.0]) == pytest.approx(0.5**0.5)
    assert integral.crude_constants(1.0, 2.0) == (1.0, 1.0)
    assert integral.crude_constants(1.5, 2.0) is None
    assert weak.null_atoms().tolist() == [False, False, False]


def test_admissibility(rng):
    report = check_admissible(WeightedLs(n=4, s=1.0, weights=np.ones(4)), samples=50)
    assert report.admissible
    assert report.subadditivity_violations == 0
    quasi = check_admissible(WeightedLs(n=4, s=0.5, weights=np.ones(4)), samples=50)
    assert quasi.admissible
    assert quasi.subadditivity_violations > 0
    assert quasi.max_disjoint_ratio > 1.0


def test_random_vector(rng):
    for _ in range(20):
        support = (rng.random(5) < 0.5).astype(float)
        support[0] = 1.0
        vector = random_vector(5, rng, support)
        assert vector.any()
        assert np.all(vector[support == 0] == 0)
        assert np.all(vector >= 0)


def _renorm_w_by_enumeration(base, f, p):
    carrier = sum(1 << i for i in range(len(f)) if f[i] > 0)
    if not carrier:
        return 0.0
    best = np.inf
    for partition in enumerate_partitions(carrier):
        total = 0.0
        for block in partition.blocks:
            mask = np.zeros(len(f))
            mask[members(block)] = 1.0
            total += base(f * mask) ** p
        best = min(best, total)
    return best ** (1.0 / p)


def test_renorm_w_is_a_partition_infimum(rng):
    base = MaxOf(
        n=4,
        first=WeightedLs(n=4, s=1.5, weights=rng.uniform(0.2, 2.0, 4)),
        second=WeightedLs(n=4, s=1.2, weights=rng.uniform(0.2, 2.0, 4)),
    )
    w = RenormW(n=4, p=1.0, base=base)
    for _ in range(10):
        f = random_vector(4, rng)
        assert w(f) == pytest.approx(_renorm_w_by_enumeration(base, f, 1.0), rel=1e-12)
        assert w(f) <= base(f) * (1 + 1e-12)


def test_renorm_of_exact_space_is_identity(rng):
    spec = WeightedLs(n=4, s=1.5, weights=rng.uniform(0.2, 2.0, 4))
    result = renorm(spec, 1.0, 2.0)
    assert (result.a, result.b) == (1.0, 1.0)
    assert isinstance(result.Y, RenormV)
    for _ in range(10):
        f = random_vector(4, rng)
        assert result.Y(f) == pytest.approx(spec(f), rel=1e-10)


@pytest.mark.parametrize("seed", range(5))
def test_renorm_sandwich_and_estimates(seed):
    spec = random_norm(4, 1.0, 2.0, np.random.default_rng(seed))
    result = renorm(spec, 1.0, 2.0, samples=100, seed=seed)
    assert result.check is not None
    assert result.check.passed
    assert result.check.max_sandwich_ratio <= result.a * result.b * (1 + 1e-6)


def test_renorm_scaled_when_a_exceeds_one(rng):
    spec = WeightedLs(n=3, s=1.5, weights=np.ones(3))
    result = renorm(spec, 1.0, 2.0, a=2.0, b=1.0)
    assert isinstance(result.Y, Scaled)
    check = verify_renorm(spec, result, samples=30)
    assert check.upper_violations == 0 and check.lower_violations == 0


def test_renorm_preconditions():
    spec = WeightedLs(n=3, s=3.0, weights=np.ones(3))
    with pytest.raises(WrongRegimeError):
        renorm(spec, 2.0, 1.0)
    with pytest.raises(PreconditionError):
        renorm(spec, 1.0, 2.0)
    with pytest.raises(PreconditionError):
        renorm(spec, 1.0, 2.0, a=0.5, b=1.0)
