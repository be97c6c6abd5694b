# -*- coding: utf-8 -*-
"""
Factorization of a finite operator T: ℓ_∞^n -> Y through L_{q,r}(μ).

The Z quasi-norm ‖f‖_Z = sup (Σ ‖Tg_i‖^q)^{1/q} over disjoint g_i with |g_i| <= |f| is a partition DP whose block
score is the largest ‖Tg‖^q over the box |g| <= |f| on the block. For a Banach codomain that maximum sits at a sign
vertex, so enumerating vertices is exact; for r < 1 a coordinate ascent from the best vertex only bounds it below.
"""
import itertools
import math
from typing import Any, Dict, Literal, Optional, Tuple

import numpy as np
from logzero import logger
from pydantic import confloat, validator

from setfn.base import BaseSchema, frozen_array
from setfn.config import get_settings
from setfn.convexity import coordinate_ascent
from setfn.exceptions import PreconditionError, TooManyAtomsError
from setfn.lattice import lattice_measure_upper
from setfn.lorentz import comparison_constants, lpq_norm, rearrange
from setfn.measures import AtomicMeasure
from setfn.quasinorm import Estimates, QuasiNormSpec, check_admissible, parse_spec, random_vector
from setfn.setcore import enumerate_partitions, members, partition_table
from setfn.setfunctions import kp_constant
from setfn.types import CertificateMode, Exponent, Mode
from setfn.utils import derive_seed, make_rng, run_ordered

Z_MAX_ATOMS = 12
VERIFY_TOL = 1e-9
ADMISSIBILITY_SAMPLES = 50


class OperatorSpec(BaseSchema):
    """T as an m×n matrix acting on functions on n atoms, with the quasi-norm of its m-dimensional codomain"""

    matrix: np.ndarray
    codomain: QuasiNormSpec
    r: confloat(gt=0, le=1) = 1.0  # type: ignore[valid-type]
    q: Exponent = 2.0

    @validator("matrix", pre=True)
    def _matrix(cls, matrix):
        return frozen_array(matrix, ndim=2)

    @validator("codomain", pre=True)
    def _codomain(cls, codomain, values):
        spec = parse_spec(codomain)
        matrix = values.get("matrix")
        if matrix is not None and matrix.shape[0] != spec.n:
            raise ValueError(f"codomain has {spec.n} atoms but T has {matrix.shape[0]} rows")
        return spec

    @validator("q")
    def _q_above_r(cls, q, values):
        r = values.get("r")
        if r is not None and q <= r:
            raise ValueError(f"q must exceed r, got r={r}, q={q}")
        return q

    @property
    def n(self) -> int:
        return int(self.matrix.shape[1])

    @property
    def m(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def mode(self) -> CertificateMode:
        return CertificateMode.EXACT if self.r == 1 else CertificateMode.HEURISTIC

    def image_norm(self, f) -> float:
        return self.codomain(self.matrix @ np.asarray(f, dtype=float))

    def scale(self, factor: float) -> "OperatorSpec":
        return self.copy(update={"matrix": frozen_array(self.matrix * factor, ndim=2)})


def _mode(operator: OperatorSpec, mode: Optional[CertificateMode]) -> CertificateMode:
    mode = operator.mode if mode is None else CertificateMode(mode)
    if mode is CertificateMode.EXACT and operator.r != 1:
        raise PreconditionError(f"exact mode needs a Banach codomain (r = 1), got r={operator.r}")
    if operator.n > Z_MAX_ATOMS:
        raise TooManyAtomsError(f"vertex enumeration supports at most {Z_MAX_ATOMS} atoms, got {operator.n}")
    return mode


def block_scores(operator: OperatorSpec, f, mode: Optional[CertificateMode] = None, budget: int = 0) -> np.ndarray:
    """
    scores[B] = max ‖Tg‖^q over g supported on B with |g| <= |f|, for every bitmask B over supp f
    """
    mode = _mode(operator, mode)
    f = np.abs(np.asarray(f, dtype=float))
    n, q = operator.n, operator.q
    atoms = np.nonzero(f > 0)[0]
    scores = np.zeros(1 << n)
    if not len(atoms):
        return scores
    digits = np.array(list(itertools.product((0.0, 1.0, -1.0), repeat=len(atoms)))).reshape(-1, len(atoms))
    vectors = np.zeros((len(digits), n))
    vectors[:, atoms] = digits * f[atoms]
    values = operator.codomain.evaluate_rows(np.abs(vectors @ operator.matrix.T)) ** q
    masks = (digits != 0).astype(np.int64) @ (np.int64(1) << atoms.astype(np.int64))
    np.maximum.at(scores, masks, values)
    if mode is CertificateMode.HEURISTIC:
        budget = budget or 8 * n

        def objective(g: np.ndarray) -> float:
            return operator.image_norm(g) ** q

        for block in np.unique(masks[masks > 0]):
            rows = np.nonzero(masks == block)[0]
            start = vectors[rows[int(np.argmax(values[rows]))]]
            bounds = f * np.isin(np.arange(n), members(int(block)))
            value, _, _ = coordinate_ascent(objective, start, budget, bounds=bounds, signed=True)
            scores[block] = max(scores[block], value)
    return scores


def z_table(operator: OperatorSpec, f, mode: Optional[CertificateMode] = None) -> np.ndarray:
    """‖fχ_A‖_Z for every bitmask A"""
    dp, _ = partition_table(block_scores(operator, f, mode), Mode.MAX)
    return dp ** (1.0 / operator.q)


def z_norm(operator: OperatorSpec, f, mode: Optional[CertificateMode] = None) -> float:
    return float(z_table(operator, f, mode)[-1])


def z_norm_partitions(operator: OperatorSpec, f) -> float:
    """
    ‖f‖_Z by enumerating every partition of supp f and every sign vertex of each block; exponential, small n only
    """
    _mode(operator, CertificateMode.EXACT)
    f = np.abs(np.asarray(f, dtype=float))
    carrier = sum(1 << int(i) for i in np.nonzero(f > 0)[0])
    if not carrier:
        return 0.0
    cache: Dict[int, float] = {}

    def score(block: int) -> float:
        if block not in cache:
            atoms = members(block)
            best = 0.0
            for signs in itertools.product((1.0, -1.0), repeat=len(atoms)):
                g = np.zeros(operator.n)
                g[atoms] = np.array(signs) * f[atoms]
                best = max(best, operator.image_norm(g) ** operator.q)
            cache[block] = best
        return cache[block]

    best = max(sum(score(block) for block in partition.blocks) for partition in enumerate_partitions(carrier))
    return float(best ** (1.0 / operator.q))


def disjointness_constant_C1(operator: OperatorSpec, mode: Optional[CertificateMode] = None) -> float:
    """Best C1 with (Σ‖Tf_i‖^q)^{1/q} <= C1 max‖f_i‖_∞ over disjoint f_i"""
    return z_norm(operator, np.ones(operator.n), mode)


def _validate_operator(cls, value: Any, values: Dict[str, Any]) -> OperatorSpec:
    operator = value if isinstance(value, OperatorSpec) else OperatorSpec.parse_obj(value)
    n = values.get("n")
    if n is not None and operator.n != n:
        raise ValueError(f"operator acts on {operator.n} atoms, expected {n}")
    return operator


class ZNorm(QuasiNormSpec):
    """‖·‖_Z of an operator, usable wherever a quasi-norm spec is"""

    kind: Literal["z-norm"] = "z-norm"
    operator: OperatorSpec

    _check_operator = validator("operator", pre=True, allow_reuse=True)(_validate_operator)

    def evaluate(self, f: np.ndarray) -> float:
        return z_norm(self.operator, f)

    def subset_table(self, f: Any) -> np.ndarray:
        return z_table(self.operator, self._check(f))

    def crude_constants(self, p: float, q: float) -> Estimates:
        return (1.0, 1.0) if p <= self.operator.r and self.operator.q <= q else None

    def null_atoms(self) -> np.ndarray:
        return ~np.any(self.operator.matrix != 0, axis=0)


class FactorizationCertificate(BaseSchema):
    measure: AtomicMeasure
    C1: float
    C2: float
    C3: float
    C4: float
    B: float
    p: float
    q: float
    r: float
    kp: float
    comparison: float
    mode: CertificateMode
    max_ratio_iv: float
    samples: int


def _check_codomain(operator: OperatorSpec, seed: int) -> None:
    report = check_admissible(operator.codomain, ADMISSIBILITY_SAMPLES, seed)
    if not report.admissible:
        raise PreconditionError(f"codomain {operator.codomain.kind} is not an admissible quasi-norm: {report}")
    if operator.mode is CertificateMode.EXACT and report.subadditivity_violations:
        raise PreconditionError("exact mode needs a subadditive codomain; lower r or fix the codomain")


def _exponent_p(operator: OperatorSpec, p: Optional[float]) -> float:
    p = (operator.r + operator.q) / 2.0 if p is None else p
    if not operator.r <= p < operator.q:
        raise PreconditionError(f"p must satisfy r <= p < q, got r={operator.r}, p={p}, q={operator.q}")
    return p


def factorization_measure(
    operator: OperatorSpec, p: Optional[float] = None, samples: int = 100, seed: int = 0
) -> FactorizationCertificate:
    """
    Probability μ and constants with ‖Tf‖ <= C4 ‖f‖_{L_{q,r}(μ)}.

    μ is the normalized dominating measure of A -> ‖χ_A‖_Z^q; the Λ_{q,r} bound it carries becomes an L_{q,r}
    bound through the rearrangement comparison constant.
    """
    p = _exponent_p(operator, p)
    mode = _mode(operator, None)
    _check_codomain(operator, seed)
    r, q = operator.r, operator.q
    kp = kp_constant(r / q)
    comparison = comparison_constants((q, r))[0]
    c1 = disjointness_constant_C1(operator)
    if c1 <= 0:
        logger.info("T vanishes; returning the uniform measure with zero constants")
        zero = dict.fromkeys(("C1", "C2", "C3", "C4", "B", "max_ratio_iv"), 0.0)
        return FactorizationCertificate(
            measure=AtomicMeasure(n=operator.n, weights=np.full(operator.n, 1.0 / operator.n)),
            p=p,
            q=q,
            r=r,
            kp=kp,
            comparison=comparison,
            mode=mode,
            samples=0,
            **zero,
        )
    z = ZNorm(n=operator.n, operator=operator)
    lattice = lattice_measure_upper(z, r, q, np.full(operator.n, 1.0 / c1), a=1.0, b=1.0, samples=samples, seed=seed)
    c4 = c1 * kp ** (1.0 / q) / comparison
    c3 = c4 * (q / (q - p)) ** (1.0 / r)
    measure = lattice.measure
    worst, _ = _condition_iv(operator, measure, c4, samples, make_rng(seed, "factorize"))
    if mode is CertificateMode.HEURISTIC:
        logger.warning(f"r={r} < 1: Z is a search lower bound, the constant chain is not certified")
    return FactorizationCertificate(
        measure=measure,
        C1=c1,
        C2=c3,
        C3=c3,
        C4=c4,
        B=c4 / c1,
        p=p,
        q=q,
        r=r,
        kp=kp,
        comparison=comparison,
        mode=mode,
        max_ratio_iv=worst,
        samples=samples,
    )


def _ratio(measured: float, bound: float) -> float:
    if bound > 0:
        return measured / bound
    return 0.0 if measured <= 0 else math.inf


def _violates(measured: float, constant: float, bound: float) -> bool:
    return measured > constant * bound * (1 + VERIFY_TOL) + VERIFY_TOL


def _signed_vector(n: int, rng: np.random.Generator) -> np.ndarray:
    return random_vector(n, rng) * rng.choice((-1.0, 1.0), size=n)


def _condition_iv(
    operator: OperatorSpec, measure: AtomicMeasure, c4: float, samples: int, rng: np.random.Generator
) -> Tuple[float, int]:
    """Scaled unit vectors first, then random signed f"""
    worst, violations = 0.0, 0
    for index in range(samples):
        if index < operator.n:
            f = np.eye(operator.n)[index] * float(rng.uniform(0.5, 2.0))
        else:
            f = _signed_vector(operator.n, rng)
        measured = operator.image_norm(f)
        bound = lpq_norm(rearrange(f, measure), (operator.q, operator.r))
        worst = max(worst, _ratio(measured, bound))
        violations += _violates(measured, c4, bound)
    return worst, violations


class ConditionReport(BaseSchema):
    mode: CertificateMode
    samples: int
    p: float
    max_ratio_ii: float = 0.0
    max_ratio_iii: float = 0.0
    max_ratio_iv: float = 0.0
    violations_ii: int = 0
    violations_iii: int = 0
    violations_iv: int = 0
    caveat: Optional[str] = None

    @property
    def violations(self) -> int:
        return self.violations_ii + self.violations_iii + self.violations_iv

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _verify_chunk(
    operator: OperatorSpec, cert: FactorizationCertificate, p: float, samples: int, seed: int
) -> ConditionReport:
    rng = make_rng(seed, "verify")
    n, q, weights = operator.n, operator.q, cert.measure.weights
    worst_iv, violations_iv = _condition_iv(operator, cert.measure, cert.C4, samples, rng)
    worst_ii = worst_iii = 0.0
    violations_ii = violations_iii = 0
    for _ in range(samples):
        f = _signed_vector(n, rng)
        sup = float(np.max(np.abs(f)))
        measured = operator.image_norm(f)
        bound = sup ** (1.0 - p / q) * float(np.sum(weights * np.abs(f) ** p)) ** (1.0 / q)
        worst_iii = max(worst_iii, _ratio(measured, bound))
        violations_iii += _violates(measured, cert.C3, bound)

        family = np.array([_signed_vector(n, rng) for _ in range(int(rng.integers(2, n + 2)))])
        measured = float(np.sum([operator.image_norm(row) ** q for row in family]) ** (1.0 / q))
        bound = float(np.max(np.sum(np.abs(family) ** p, axis=0) ** (1.0 / p)))
        worst_ii = max(worst_ii, _ratio(measured, bound))
        violations_ii += _violates(measured, cert.C2, bound)
    return ConditionReport(
        mode=cert.mode,
        samples=samples,
        p=p,
        max_ratio_ii=worst_ii,
        max_ratio_iii=worst_iii,
        max_ratio_iv=worst_iv,
        violations_ii=violations_ii,
        violations_iii=violations_iii,
        violations_iv=violations_iv,
    )


def verify_conditions(
    operator: OperatorSpec,
    cert: FactorizationCertificate,
    samples: int = 1000,
    seed: int = 0,
    p: Optional[float] = None,
    workers: Optional[int] = None,
) -> ConditionReport:
    """
    Sample the disjoint-sum (ii), interpolation (iii) and Lorentz (iv) inequalities of the certificate and report
    the largest ratios against C2, C3, C4. Violations are data, never errors.
    """
    p = cert.p if p is None else _exponent_p(operator, p)
    workers = max(1, min(workers or get_settings().workers, max(samples, 1)))
    shares = [samples // workers + (index < samples % workers) for index in range(workers)]
    chunks = run_ordered(
        lambda index: _verify_chunk(operator, cert, p, shares[index], derive_seed(seed, "chunk", index)),
        list(range(workers)),
        workers,
    )
    report = ConditionReport(
        mode=cert.mode,
        samples=samples,
        p=p,
        max_ratio_ii=max(chunk.max_ratio_ii for chunk in chunks),
        max_ratio_iii=max(chunk.max_ratio_iii for chunk in chunks),
        max_ratio_iv=max(chunk.max_ratio_iv for chunk in chunks),
        violations_ii=sum(chunk.violations_ii for chunk in chunks),
        violations_iii=sum(chunk.violations_iii for chunk in chunks),
        violations_iv=sum(chunk.violations_iv for chunk in chunks),
        caveat=(
            "codomain is only r-normable; Z and every constant are search lower bounds"
            if cert.mode is CertificateMode.HEURISTIC
            else None
        ),
    )
    if not report.passed:
        logger.warning(f"factorization conditions violated: {report.violations} of {3 * samples} checks")
    return report
