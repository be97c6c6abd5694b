# -*- coding: utf-8 -*-
"""
Measures attached to a lattice quasi-norm X through the set-functions A -> ‖fχ_A‖^s.

``lpinfty_embedding_measure`` gives ‖g/f‖_{L_{p,∞}(μ)} <= ‖g‖_X, ``lattice_measure_lower`` bounds the
Λ_{p,q}(μ)-norm of g/f by ‖g‖_X and ``lattice_measure_upper`` bounds ‖g‖_X by the Λ_{q,p}(λ)-norm of g/f. Each
certificate re-checks its inequality on sampled g and records the largest ratio seen.
"""
from typing import Callable, Optional, Tuple

import numpy as np
from logzero import logger

from setfn.base import BaseSchema
from setfn.config import get_settings
from setfn.exceptions import BoundViolation, ClassificationError, NumericalError, PreconditionError
from setfn.lorentz import lambda_inf_norm, lambda_sup_norm, lp_weak_norm, rearrange
from setfn.measures import AtomicMeasure, equivalent_measure, max_dominated_measure, min_dominating_measure
from setfn.quasinorm import QuasiNormSpec, random_vector, renorm
from setfn.setfunctions import (
    SetFunction,
    estimate_exponents,
    kp_constant,
    satisfies_lower_estimate,
    satisfies_upper_estimate,
)
from setfn.types import Side
from setfn.utils import make_rng

NORM_TOL = 1e-9


class LatticeMeasureCertificate(BaseSchema):
    side: Side
    measure: AtomicMeasure
    constant: float
    max_observed_ratio: float
    samples: int
    violations: int = 0
    extracted_mass: float
    kp: float

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _unit_vector(spec: QuasiNormSpec, f) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if np.any(f < 0):
        raise PreconditionError("f must be non-negative")
    norm = spec(f)
    if abs(norm - 1.0) > NORM_TOL:
        raise PreconditionError(f"f must have ‖f‖_X = 1, got {norm}")
    return f


def _restricted_quotient(f: np.ndarray, g: np.ndarray, measure: AtomicMeasure) -> Tuple[np.ndarray, AtomicMeasure]:
    """g/f on supp f; the measure is restricted to supp f"""
    support = f > 0
    quotient = np.zeros_like(f)
    quotient[support] = np.abs(g[support]) / f[support]
    return quotient, AtomicMeasure(n=measure.n, weights=measure.weights * support)


def _require_supported(f: np.ndarray, g: np.ndarray) -> None:
    if np.any((np.abs(g) > 0) & ~(f > 0)):
        raise PreconditionError("g must vanish off the support of f")


def embedding_ratio(spec: QuasiNormSpec, f, g, measure: AtomicMeasure, p: float) -> float:
    """‖g/f‖_{L_{p,∞}(μ)} / ‖g‖_X"""
    f, g = np.asarray(f, dtype=float), np.asarray(g, dtype=float)
    quotient, restricted = _restricted_quotient(f, g, measure)
    return lp_weak_norm(rearrange(quotient, restricted), p) / spec(g * (f > 0))


def lower_ratio(spec: QuasiNormSpec, f, g, measure: AtomicMeasure, p: float, q: float) -> float:
    """‖g/f‖_{Λ_{p,q}(μ)} / ‖g‖_X"""
    f, g = np.asarray(f, dtype=float), np.asarray(g, dtype=float)
    quotient, restricted = _restricted_quotient(f, g, measure)
    return lambda_sup_norm(rearrange(quotient, restricted), (p, q)) / spec(g * (f > 0))


def upper_ratio(spec: QuasiNormSpec, f, g, measure: AtomicMeasure, p: float, q: float) -> float:
    """‖g‖_X / ‖g/f‖_{Λ_{q,p}(λ)}"""
    f, g = np.asarray(f, dtype=float), np.asarray(g, dtype=float)
    _require_supported(f, g)
    quotient, restricted = _restricted_quotient(f, g, measure)
    denominator = lambda_inf_norm(rearrange(quotient, restricted, pad_zero=True), (q, p))
    return spec(g) / denominator if denominator > 0 else float("inf")


def _sample(
    f: np.ndarray, samples: int, seed: int, key: str, ratio: Callable[[np.ndarray], float], constant: float
) -> Tuple[float, int]:
    rng = make_rng(seed, key)
    support = (f > 0).astype(float)
    worst = ratio(f)
    violations = int(worst > constant * (1 + NORM_TOL) + NORM_TOL)
    for _ in range(max(samples - 1, 0)):
        value = ratio(random_vector(len(f), rng, support))
        worst = max(worst, value)
        violations += int(value > constant * (1 + NORM_TOL) + NORM_TOL)
    return worst, violations


def norm_setfunction(spec: QuasiNormSpec, f: np.ndarray, exponent: float) -> SetFunction:
    """A -> ‖fχ_A‖^exponent"""
    table = np.array(spec.subset_table(f)) ** exponent
    table[0] = 0.0
    return SetFunction(n=spec.n, values=table)


def lpinfty_embedding_measure(
    spec: QuasiNormSpec, p: float, q: float, f, samples: int = 100, seed: int = 0
) -> LatticeMeasureCertificate:
    """
    μ <= φ = ‖fχ_A‖^p with μ(Ω) >= K_{q/p}, for X with exact upper p- and lower q-estimates
    """
    if not 0 < p < q:
        raise PreconditionError(f"embedding needs 0 < p < q, got p={p}, q={q}")
    f = _unit_vector(spec, f)
    phi = norm_setfunction(spec, f, p)
    if not (satisfies_upper_estimate(phi, 1.0) and satisfies_lower_estimate(phi, q / p)):
        raise ClassificationError(f"‖fχ_A‖^p is not a submeasure with a lower {q / p}-estimate; are the estimates exact?")
    solution = max_dominated_measure(phi)
    if not solution.optimal:
        raise NumericalError(f"dominated LP finished with status {solution.status.value}")
    kp = kp_constant(q / p)
    if solution.objective < kp * phi.total - get_settings().tol:
        raise BoundViolation(f"dominated mass {solution.objective} below K_{q / p} = {kp}")
    measure = solution.measure
    worst, violations = _sample(
        f, samples, seed, "embedding", lambda g: embedding_ratio(spec, f, g, measure, p), 1.0
    )
    return LatticeMeasureCertificate(
        side=Side.EMBEDDING,
        measure=measure,
        constant=1.0,
        max_observed_ratio=worst,
        samples=samples,
        violations=violations,
        extracted_mass=solution.objective,
        kp=kp,
    )


def nondegeneracy_measure(spec: QuasiNormSpec, p: float, q: Optional[float] = None, b: float = 1.0) -> AtomicMeasure:
    """
    Measure with the null sets of A -> ‖χ_A‖^p.

    With q the lower estimate of X (constant b) the set-function has a crude lower q/p-estimate with constant b^{-p};
    without q its own least lower exponent is estimated and used exactly.
    """
    phi = norm_setfunction(spec, np.ones(spec.n), p)
    if q is not None:
        exponent, c = q / p, b ** (-p)
    else:
        exponent = estimate_exponents(phi).lower
        if exponent is None:
            if phi.total <= 0:
                return AtomicMeasure.zero(spec.n)
            raise PreconditionError("‖χ_A‖^p has no finite lower estimate; pass q explicitly")
        c = 1.0
    return equivalent_measure(phi, max(exponent, 1.0), c)


def _renormed(spec: QuasiNormSpec, p: float, q: float, a: Optional[float], b: Optional[float]):
    result = renorm(spec, p, q, a, b)
    if result.a == 1 and result.b == 1:
        return spec, result.a, result.b
    return result.Y, result.a, result.b


def lattice_measure_lower(
    spec: QuasiNormSpec,
    p: float,
    q: float,
    f,
    a: Optional[float] = None,
    b: Optional[float] = None,
    samples: int = 100,
    seed: int = 0,
) -> LatticeMeasureCertificate:
    """
    Probability μ with ‖g/f‖_{Λ_{p,q}(μ)} <= ab K_{q/p}^{-1/p} ‖g‖_X
    """
    f = _unit_vector(spec, f)
    y, a, b = _renormed(spec, p, q, a, b)
    phi = norm_setfunction(y, f, p)
    if not (satisfies_upper_estimate(phi, 1.0) and satisfies_lower_estimate(phi, q / p)):
        raise ClassificationError("‖fχ_A‖_Y^p failed its submeasure / lower estimate classification")
    solution = max_dominated_measure(phi)
    if not solution.optimal:
        raise NumericalError(f"dominated LP finished with status {solution.status.value}")
    kp = kp_constant(q / p)
    if solution.objective < kp * phi.total - get_settings().tol:
        raise BoundViolation(f"dominated mass {solution.objective} below K_{q / p}·φ(Ω) = {kp * phi.total}")
    measure = solution.measure.scale(1.0 / solution.objective)
    constant = a * b * kp ** (-1.0 / p)
    worst, violations = _sample(
        f, samples, seed, "lower", lambda g: lower_ratio(spec, f, g, measure, p, q), constant
    )
    logger.debug(f"lattice_measure_lower p={p} q={q} a={a} b={b} worst={worst:.6g} constant={constant:.6g}")
    return LatticeMeasureCertificate(
        side=Side.LOWER,
        measure=measure,
        constant=constant,
        max_observed_ratio=worst,
        samples=samples,
        violations=violations,
        extracted_mass=solution.objective,
        kp=kp,
    )


def lattice_measure_upper(
    spec: QuasiNormSpec,
    p: float,
    q: float,
    f,
    a: Optional[float] = None,
    b: Optional[float] = None,
    samples: int = 100,
    seed: int = 0,
) -> LatticeMeasureCertificate:
    """
    Probability λ with ‖g‖_X <= ab K_{p/q}^{1/q} ‖g/f‖_{Λ_{q,p}(λ)} for g supported where f is
    """
    f = _unit_vector(spec, f)
    y, a, b = _renormed(spec, p, q, a, b)
    phi = norm_setfunction(y, f, q)
    if not (satisfies_lower_estimate(phi, 1.0) and satisfies_upper_estimate(phi, p / q)):
        raise ClassificationError("‖fχ_A‖_Y^q failed its supermeasure / upper estimate classification")
    solution = min_dominating_measure(phi.scale(1.0 / phi.total), enforce_continuity=True)
    if not solution.optimal:
        raise NumericalError(f"dominating LP finished with status {solution.status.value}")
    kp = kp_constant(p / q)
    if solution.objective > kp + get_settings().tol:
        raise BoundViolation(f"dominating mass {solution.objective} above K_{p / q} = {kp}")
    measure = solution.measure.scale(1.0 / solution.objective)
    constant = a * b * kp ** (1.0 / q)
    worst, violations = _sample(
        f, samples, seed, "upper", lambda g: upper_ratio(spec, f, g, measure, p, q), constant
    )
    logger.debug(f"lattice_measure_upper p={p} q={q} a={a} b={b} worst={worst:.6g} constant={constant:.6g}")
    return LatticeMeasureCertificate(
        side=Side.UPPER,
        measure=measure,
        constant=constant,
        max_observed_ratio=worst,
        samples=samples,
        violations=violations,
        extracted_mass=solution.objective,
        kp=kp,
    )


def lattice_measure(side: Side, spec: QuasiNormSpec, p: float, q: float, f, **options) -> LatticeMeasureCertificate:
    side = Side(side)
    if side is Side.EMBEDDING:
        options.pop("a", None)
        options.pop("b", None)
        return lpinfty_embedding_measure(spec, p, q, f, **options)
    if side is Side.LOWER:
        return lattice_measure_lower(spec, p, q, f, **options)
    return lattice_measure_upper(spec, p, q, f, **options)
