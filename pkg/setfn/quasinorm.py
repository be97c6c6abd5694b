# -*- coding: utf-8 -*-
"""
Quasi-norms on non-negative n-vectors, parsed from JSON by their ``kind`` and evaluated on |f|.

Besides ``evaluate`` every spec exposes ``subset_table(f)``: the values ‖fχ_A‖ for all 2^n subsets A at once. The
renormed specs compute that table with a single partition DP, and the lattice constructions read their
set-functions straight from it.
"""
import math
from typing import Any, ClassVar, Dict, Literal, Optional, Tuple, Type, Union

import numpy as np
from logzero import logger
from pydantic import PrivateAttr, validator

from setfn.base import BaseSchema, frozen_array
from setfn.exceptions import InvalidInputError, PreconditionError, WrongRegimeError
from setfn.lorentz import (
    comparison_constants,
    lambda_inf_norm,
    lambda_sup_norm,
    lp_weak_norm,
    lpq_norm,
    rearrange,
)
from setfn.measures import AtomicMeasure
from setfn.setcore import incidence_matrix, partition_table, submasks
from setfn.types import AtomCount, Exponent, Mode
from setfn.utils import make_rng

MEMO_SIZE = 2048

Estimates = Optional[Tuple[float, float]]


def _masks_matrix(n: int) -> np.ndarray:
    return np.vstack([np.zeros(n), incidence_matrix(n)])


class QuasiNormSpec(BaseSchema):
    n: AtomCount
    kind: str

    registry: ClassVar[Dict[str, Type["QuasiNormSpec"]]] = {}

    def __init_subclass__(cls, **kwargs: Any) -> None:
        super().__init_subclass__(**kwargs)
        field = cls.__fields__.get("kind")
        if field is not None and isinstance(field.default, str):
            QuasiNormSpec.registry[field.default] = cls

    def _check(self, f: Any) -> np.ndarray:
        vector = np.abs(np.asarray(f, dtype=float))
        if vector.shape != (self.n,):
            raise PreconditionError(f"{self.kind} expects {self.n} coordinates, got shape {vector.shape}")
        if not np.all(np.isfinite(vector)):
            raise PreconditionError("vectors must be finite")
        return vector

    def __call__(self, f: Any) -> float:
        return self.evaluate(self._check(f))

    def evaluate(self, f: np.ndarray) -> float:
        raise NotImplementedError

    def evaluate_rows(self, rows: np.ndarray) -> np.ndarray:
        return np.array([self.evaluate(row) for row in rows])

    def subset_table(self, f: Any) -> np.ndarray:
        """‖fχ_A‖ for every subset A, indexed by bitmask"""
        f = self._check(f)
        return self.evaluate_rows(_masks_matrix(self.n) * f[None, :])

    def crude_constants(self, p: float, q: float) -> Estimates:
        """
        (a, b) with ‖Σf_i‖ <= a(Σ‖f_i‖^p)^{1/p} and (Σ‖f_i‖^q)^{1/q} <= b‖Σf_i‖ on disjoint families, when known
        """
        return None

    def null_atoms(self) -> np.ndarray:
        return np.array([self.evaluate(np.eye(self.n)[i]) <= 0 for i in range(self.n)])


def parse_spec(data: Union[QuasiNormSpec, Dict[str, Any]]) -> QuasiNormSpec:
    if isinstance(data, QuasiNormSpec):
        return data
    if not isinstance(data, dict) or "kind" not in data:
        raise InvalidInputError("quasi-norm spec must be an object with a 'kind' field")
    cls = QuasiNormSpec.registry.get(data["kind"])
    if cls is None:
        known = ", ".join(sorted(QuasiNormSpec.registry))
        raise InvalidInputError(f"unknown quasi-norm kind {data['kind']!r}; known kinds: {known}")
    return cls.parse_obj(data)


def _validate_weights(cls, value: Any, values: Dict[str, Any]) -> np.ndarray:
    array = frozen_array(value)
    n = values.get("n")
    if n is not None and array.shape != (n,):
        raise ValueError(f"expected {n} weights, got shape {array.shape}")
    if np.any(array < 0):
        raise ValueError("weights must be non-negative")
    return array


class WeightedLs(QuasiNormSpec):
    """(Σ w_i |f_i|^s)^{1/s}"""

    kind: Literal["weighted-ls"] = "weighted-ls"
    s: Exponent
    weights: np.ndarray

    _check_weights = validator("weights", pre=True, allow_reuse=True)(_validate_weights)

    def evaluate(self, f: np.ndarray) -> float:
        return float(np.sum(self.weights * f**self.s) ** (1.0 / self.s))

    def evaluate_rows(self, rows: np.ndarray) -> np.ndarray:
        return np.sum(self.weights[None, :] * rows**self.s, axis=1) ** (1.0 / self.s)

    def crude_constants(self, p: float, q: float) -> Estimates:
        return (1.0, 1.0) if p <= self.s <= q else None

    def null_atoms(self) -> np.ndarray:
        return self.weights <= 0


class _LorentzSpec(QuasiNormSpec):
    p: Exponent
    weights: np.ndarray

    _check_weights = validator("weights", pre=True, allow_reuse=True)(_validate_weights)

    @property
    def measure(self) -> AtomicMeasure:
        return AtomicMeasure(n=self.n, weights=self.weights)

    def null_atoms(self) -> np.ndarray:
        return self.weights <= 0


class LorentzLambda(_LorentzSpec):
    """Λ_{p,q}(μ): supremum over partitions when p < q, infimum when q < p"""

    kind: Literal["lorentz-lambda"] = "lorentz-lambda"
    q: Exponent

    @validator("q")
    def _distinct(cls, q, values):
        if values.get("p") == q:
            raise ValueError("lorentz-lambda needs p != q; use lorentz-integral for p = q")
        return q

    def evaluate(self, f: np.ndarray) -> float:
        if self.p < self.q:
            return lambda_sup_norm(rearrange(f, self.measure), (self.p, self.q))
        return lambda_inf_norm(rearrange(f, self.measure, pad_zero=True), (self.p, self.q))

    def crude_constants(self, p: float, q: float) -> Estimates:
        if self.p < self.q and p <= self.p and self.q <= q:
            return comparison_constants((self.p, self.q))[1], 1.0
        return None


class LorentzIntegral(_LorentzSpec):
    """L_{p,q}(μ) through the rearrangement integral"""

    kind: Literal["lorentz-integral"] = "lorentz-integral"
    q: Exponent

    def evaluate(self, f: np.ndarray) -> float:
        return lpq_norm(rearrange(f, self.measure), (self.p, self.q))

    def crude_constants(self, p: float, q: float) -> Estimates:
        return (1.0, 1.0) if p <= self.p <= self.q <= q else None


class WeakLp(_LorentzSpec):
    kind: Literal["weak-lp"] = "weak-lp"

    def evaluate(self, f: np.ndarray) -> float:
        return lp_weak_norm(rearrange(f, self.measure), self.p)


def _validate_child(cls, value: Any, values: Dict[str, Any]) -> QuasiNormSpec:
    spec = parse_spec(value)
    n = values.get("n")
    if n is not None and spec.n != n:
        raise ValueError(f"nested spec has {spec.n} atoms, expected {n}")
    return spec


class MaxOf(QuasiNormSpec):
    kind: Literal["max-of"] = "max-of"
    first: QuasiNormSpec
    second: QuasiNormSpec

    _children = validator("first", "second", pre=True, allow_reuse=True)(_validate_child)

    def evaluate(self, f: np.ndarray) -> float:
        return max(self.first.evaluate(f), self.second.evaluate(f))

    def subset_table(self, f: Any) -> np.ndarray:
        return np.maximum(self.first.subset_table(f), self.second.subset_table(f))

    def crude_constants(self, p: float, q: float) -> Estimates:
        first, second = self.first.crude_constants(p, q), self.second.crude_constants(p, q)
        if first is None or second is None:
            return None
        return max(first[0], second[0]), (first[1] ** q + second[1] ** q) ** (1.0 / q)

    def null_atoms(self) -> np.ndarray:
        return self.first.null_atoms() & self.second.null_atoms()


class Scaled(QuasiNormSpec):
    kind: Literal["scaled"] = "scaled"
    c: Exponent
    inner: QuasiNormSpec

    _children = validator("inner", pre=True, allow_reuse=True)(_validate_child)

    def evaluate(self, f: np.ndarray) -> float:
        return self.c * self.inner.evaluate(f)

    def evaluate_rows(self, rows: np.ndarray) -> np.ndarray:
        return self.c * self.inner.evaluate_rows(rows)

    def subset_table(self, f: Any) -> np.ndarray:
        return self.c * self.inner.subset_table(f)

    def crude_constants(self, p: float, q: float) -> Estimates:
        return self.inner.crude_constants(p, q)

    def null_atoms(self) -> np.ndarray:
        return self.inner.null_atoms()


class _PartitionRenorm(QuasiNormSpec):
    """‖f‖ = opt over partitions {A_k} of supp f of (Σ ‖fχ_{A_k}‖_base^s)^{1/s}"""

    base: QuasiNormSpec
    mode: ClassVar[Mode]

    _memo: Dict[bytes, np.ndarray] = PrivateAttr(default_factory=dict)
    _children = validator("base", pre=True, allow_reuse=True)(_validate_child)

    @property
    def exponent(self) -> float:
        raise NotImplementedError

    def subset_table(self, f: Any) -> np.ndarray:
        f = self._check(f)
        key = f.tobytes()
        table = self._memo.get(key)
        if table is None:
            support = int(sum(1 << i for i in range(self.n) if f[i] > 0))
            local = submasks(support)
            scores = self.base.subset_table(f)[local] ** self.exponent
            dp, _ = partition_table(scores, self.mode)
            values = dp ** (1.0 / self.exponent)
            masks = np.arange(1 << self.n, dtype=np.int64)
            table = values[np.searchsorted(local, masks & support)]
            table.flags.writeable = False
            if len(self._memo) >= MEMO_SIZE:
                self._memo.clear()
            self._memo[key] = table
        return table

    def evaluate(self, f: np.ndarray) -> float:
        return float(self.subset_table(f)[-1])

    def null_atoms(self) -> np.ndarray:
        return self.base.null_atoms()


class RenormW(_PartitionRenorm):
    """Infimum over partitions with exponent p; exact upper p-estimate, W <= X <= aW"""

    kind: Literal["renorm-w"] = "renorm-w"
    p: Exponent
    mode: ClassVar[Mode] = Mode.MIN

    @property
    def exponent(self) -> float:
        return self.p


class RenormV(_PartitionRenorm):
    """Supremum over partitions with exponent q of a W-type base; exact upper p- and lower q-estimates"""

    kind: Literal["renorm-v"] = "renorm-v"
    q: Exponent
    mode: ClassVar[Mode] = Mode.MAX

    @property
    def exponent(self) -> float:
        return self.q

    def crude_constants(self, p: float, q: float) -> Estimates:
        inner = self.base.p if isinstance(self.base, RenormW) else None
        if inner is not None and p <= inner and self.q <= q:
            return 1.0, 1.0
        return None


def eval_norm(spec: QuasiNormSpec, f: Any) -> float:
    return spec(f)


class AdmissibilityReport(BaseSchema):
    samples: int
    monotone_violations: int
    homogeneity_violations: int
    subadditivity_violations: int
    max_disjoint_ratio: float

    @property
    def admissible(self) -> bool:
        return self.monotone_violations == 0 and self.homogeneity_violations == 0


def random_vector(n: int, rng: np.random.Generator, support: Optional[np.ndarray] = None) -> np.ndarray:
    """Non-negative vector with roughly a third of the coordinates zeroed, never identically zero"""
    vector = rng.exponential(size=n) * (rng.random(n) > 0.3)
    if support is not None:
        vector = vector * support
    if not vector.any():
        candidates = np.nonzero(support)[0] if support is not None else np.arange(n)
        if len(candidates):
            vector[rng.choice(candidates)] = rng.exponential() + 0.1
    return vector


def check_admissible(spec: QuasiNormSpec, samples: int = 100, seed: int = 0, tol: float = 1e-9) -> AdmissibilityReport:
    """
    Monotonicity, homogeneity and subadditivity on random pairs; the largest ‖f+g‖/(‖f‖+‖g‖) over disjoint f, g
    """
    rng = make_rng(seed, "admissible", spec.kind)
    monotone = homogeneous = subadditive = 0
    ratio = 0.0
    for _ in range(samples):
        f = random_vector(spec.n, rng)
        g = f + random_vector(spec.n, rng)
        nf, ng = spec.evaluate(f), spec.evaluate(g)
        scale = max(1.0, ng)
        if nf > ng + tol * scale:
            monotone += 1
        c = float(rng.uniform(0.1, 10.0))
        if abs(spec.evaluate(c * f) - c * nf) > tol * max(1.0, c * nf):
            homogeneous += 1
        h = random_vector(spec.n, rng)
        if spec.evaluate(f + h) > nf + spec.evaluate(h) + tol * scale:
            subadditive += 1
        split = rng.random(spec.n) < 0.5
        left, right = f * split, f * ~split
        parts = spec.evaluate(left) + spec.evaluate(right)
        if parts > 0:
            ratio = max(ratio, nf / parts)
    report = AdmissibilityReport(
        samples=samples,
        monotone_violations=monotone,
        homogeneity_violations=homogeneous,
        subadditivity_violations=subadditive,
        max_disjoint_ratio=ratio,
    )
    if not report.admissible:
        logger.warning(f"spec {spec.kind} failed admissibility checks: {report}")
    return report


class RenormCheck(BaseSchema):
    samples: int
    sandwich_violations: int
    upper_violations: int
    lower_violations: int
    max_sandwich_ratio: float

    @property
    def passed(self) -> bool:
        return self.sandwich_violations == 0 and self.upper_violations == 0 and self.lower_violations == 0


class RenormResult(BaseSchema):
    W: QuasiNormSpec
    V: QuasiNormSpec
    Y: QuasiNormSpec
    a: float
    b: float
    p: float
    q: float
    check: Optional[RenormCheck] = None


def _disjoint_family(n: int, rng: np.random.Generator) -> np.ndarray:
    """Rows are disjointly supported non-negative vectors"""
    k = int(rng.integers(2, max(2, n) + 1))
    labels = rng.integers(0, k, size=n)
    base = rng.exponential(size=n)
    family = np.array([base * (labels == j) for j in range(k)])
    return family[family.any(axis=1)] if family.any() else family[:1]


def verify_renorm(
    spec: QuasiNormSpec, result: RenormResult, samples: int = 100, seed: int = 0, tol: float = 1e-9
) -> RenormCheck:
    """
    Sandwich X <= Y <= abX on random vectors and the exact estimates of Y on random disjoint families
    """
    rng = make_rng(seed, "renorm-check")
    sandwich = upper = lower = 0
    worst = 0.0
    p, q, ab = result.p, result.q, result.a * result.b
    for _ in range(samples):
        f = random_vector(spec.n, rng)
        x, y = spec.evaluate(f), result.Y.evaluate(f)
        scale = tol * max(1.0, y)
        if x > y + scale or y > ab * x + scale:
            sandwich += 1
        if x > 0:
            worst = max(worst, y / x)
        family = _disjoint_family(spec.n, rng)
        total = result.Y.evaluate(family.sum(axis=0))
        parts = np.array([result.Y.evaluate(row) for row in family])
        if total**p > np.sum(parts**p) + tol * max(1.0, total**p):
            upper += 1
        if np.sum(parts**q) > total**q + tol * max(1.0, total**q):
            lower += 1
    check = RenormCheck(
        samples=samples,
        sandwich_violations=sandwich,
        upper_violations=upper,
        lower_violations=lower,
        max_sandwich_ratio=worst,
    )
    if not check.passed:
        logger.warning(f"renorm check reported violations (wrong a, b?): {check}")
    return check


def renorm(
    spec: QuasiNormSpec,
    p: float,
    q: float,
    a: Optional[float] = None,
    b: Optional[float] = None,
    samples: int = 0,
    seed: int = 0,
    tol: float = 1e-9,
) -> RenormResult:
    """
    W = inf-partition p-renorm of X, V = sup-partition q-renorm of W, Y = aV; X <= Y <= abX when a, b are right.
    """
    if not 0 < p < q:
        raise WrongRegimeError(f"renorming needs 0 < p < q, got p={p}, q={q}")
    if a is None or b is None:
        known = spec.crude_constants(p, q)
        if known is None:
            raise PreconditionError(f"no analytic crude constants for {spec.kind}; pass a and b explicitly")
        a = known[0] if a is None else a
        b = known[1] if b is None else b
    if a < 1 or b < 1 or not (math.isfinite(a) and math.isfinite(b)):
        raise PreconditionError(f"crude constants must be finite and >= 1, got a={a}, b={b}")
    w = RenormW(n=spec.n, p=p, base=spec)
    v = RenormV(n=spec.n, q=q, base=w)
    y: QuasiNormSpec = v if a == 1 else Scaled(n=spec.n, c=a, inner=v)
    result = RenormResult(W=w, V=v, Y=y, a=a, b=b, p=p, q=q)
    if samples:
        result = result.copy(update={"check": verify_renorm(spec, result, samples, seed, tol)})
    return result
