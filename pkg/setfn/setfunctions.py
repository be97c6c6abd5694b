# -*- coding: utf-8 -*-
import math
from typing import Callable, List, NamedTuple, Optional, Tuple

import numpy as np
from logzero import logger
from pydantic import validator

from setfn.base import BaseSchema, frozen_array
from setfn.config import get_settings
from setfn.exceptions import NotMonotoneError, NumericalError, PreconditionError
from setfn.setcore import GroundSet, iter_disjoint_pairs
from setfn.types import AtomCount, Subset

MAX_WITNESSES = 8
_ONE = 1.0 - 1e-12


class SetFunction(BaseSchema):
    n: AtomCount
    values: np.ndarray

    @validator("values", pre=True)
    def _table(cls, value, values):
        table = np.array(value, dtype=float)
        n = values.get("n")
        if n is not None and table.shape != (1 << n,):
            raise ValueError(f"expected {1 << n} values for n={n}, got shape {table.shape}")
        if not np.all(np.isfinite(table)):
            raise ValueError("values must be finite")
        if abs(table[0]) > 1e-12:
            raise ValueError(f"value of the empty set must be 0, got {table[0]}")
        if np.any(table < 0):
            raise ValueError("values must be non-negative")
        table[0] = 0.0
        return frozen_array(table)

    @classmethod
    def from_callable(cls, n: int, func: Callable[[Subset], float]) -> "SetFunction":
        return cls(n=n, values=[0.0] + [func(mask) for mask in range(1, 1 << n)])

    @property
    def ground(self) -> GroundSet:
        return GroundSet(n=self.n)

    @property
    def total(self) -> float:
        return float(self.values[-1])

    def __call__(self, subset: Subset) -> float:
        return float(self.values[subset])

    def scale(self, factor: float) -> "SetFunction":
        return SetFunction(n=self.n, values=self.values * factor)


class Violation(BaseSchema):
    property: str
    a: Subset
    b: Subset


class ExponentPair(NamedTuple):
    lower: Optional[float]
    upper: Optional[float]


class ClassificationReport(BaseSchema):
    monotone: bool
    submeasure: bool
    supermeasure: bool
    measure: bool
    normalized: bool
    best_lower_exponent: Optional[float] = None
    best_upper_exponent: Optional[float] = None
    witness_violations: Tuple[Violation, ...] = ()


def _scaled_tol(phi: SetFunction, tol: float) -> float:
    return tol * max(1.0, float(phi.values.max()))


def _monotone_violations(phi: SetFunction, tol: float) -> List[Violation]:
    masks = np.arange(1 << phi.n, dtype=np.int64)
    found: List[Violation] = []
    for atom in range(phi.n):
        lower = masks[(masks >> atom) & 1 == 0]
        upper = lower | (1 << atom)
        bad = np.nonzero(phi.values[upper] < phi.values[lower] - tol)[0]
        found.extend(Violation(property="monotone", a=int(lower[i]), b=int(upper[i])) for i in bad[:MAX_WITNESSES])
    return found[:MAX_WITNESSES]


def is_monotone(phi: SetFunction, tol: float = 1e-9) -> bool:
    return not _monotone_violations(phi, _scaled_tol(phi, tol))


def _pair_violations(phi: SetFunction, tol: float) -> Tuple[List[Violation], List[Violation]]:
    values = phi.values
    sub: List[Violation] = []
    sup: List[Violation] = []
    for left, right in iter_disjoint_pairs(phi.n):
        joint = values[left | right]
        parts = values[left] + values[right]
        if len(sub) < MAX_WITNESSES:
            bad = np.nonzero(joint > parts + tol)[0][: MAX_WITNESSES - len(sub)]
            sub.extend(Violation(property="submeasure", a=int(left[i]), b=int(right[i])) for i in bad)
        if len(sup) < MAX_WITNESSES:
            bad = np.nonzero(joint < parts - tol)[0][: MAX_WITNESSES - len(sup)]
            sup.extend(Violation(property="supermeasure", a=int(left[i]), b=int(right[i])) for i in bad)
        if len(sub) >= MAX_WITNESSES and len(sup) >= MAX_WITNESSES:
            break
    return sub, sup


def classify(phi: SetFunction, tol: float = 1e-9) -> ClassificationReport:
    """
    Exhaustive classification; pairwise disjoint checks are equivalent to the n-ary definitions by induction
    """
    scaled = _scaled_tol(phi, tol)
    monotone = _monotone_violations(phi, scaled)
    sub, sup = _pair_violations(phi, scaled)
    lower = upper = None
    if not monotone:
        lower, upper = estimate_exponents(phi, tol)
    return ClassificationReport(
        monotone=not monotone,
        submeasure=not monotone and not sub,
        supermeasure=not monotone and not sup,
        measure=not monotone and not sub and not sup,
        normalized=abs(phi.total - 1.0) <= tol,
        best_lower_exponent=lower,
        best_upper_exponent=upper,
        witness_violations=tuple(monotone + sub + sup),
    )


def _critical_exponents(x: np.ndarray, y: np.ndarray, tol: float, max_iter: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Bracket [lo, hi] around the root of x^p + y^p = 1 for x, y in (0, 1); the left side decreases strictly in p
    """
    lo = np.zeros_like(x)
    hi = np.ones_like(x)
    for _ in range(64):
        above = x**hi + y**hi > 1.0
        if not above.any():
            break
        lo = np.where(above, hi, lo)
        hi = np.where(above, hi * 2.0, hi)
    else:
        hi = np.where(x**hi + y**hi > 1.0, np.inf, hi)
    finite = np.isfinite(hi)
    for _ in range(max_iter):
        if not finite.any() or np.max(hi[finite] - lo[finite]) < tol:
            break
        mid = np.where(finite, (lo + hi) / 2.0, lo)
        above = x**mid + y**mid > 1.0
        lo = np.where(finite & above, mid, lo)
        hi = np.where(finite & ~above, mid, hi)
    return lo, hi


def estimate_exponents(phi: SetFunction, tol: Optional[float] = None) -> ExponentPair:
    """
    Least p with φ^p superadditive (lower) and greatest p with φ^p subadditive (upper).

    Each disjoint pair contributes its critical exponent; ``lower`` is reported at the upper end of the bisection
    bracket and ``upper`` at the lower end, so both are safe to use as exponents. ``None`` means no finite
    (respectively no positive) exponent exists, or that no disjoint pair constrains the exponent at all.
    """
    settings = get_settings()
    tol = settings.bisection_tol if tol is None else tol
    if not is_monotone(phi):
        raise NotMonotoneError("exponent estimation requires a monotone set-function")
    values = phi.values
    his: List[np.ndarray] = []
    los: List[np.ndarray] = []
    unbounded_lower = False
    no_upper = False
    seen = False
    for left, right in iter_disjoint_pairs(phi.n):
        joint = values[left | right]
        keep = joint > 0
        if not keep.any():
            continue
        x = values[left][keep] / joint[keep]
        y = values[right][keep] / joint[keep]
        positive = (x > 0) & (y > 0)
        full = (x >= _ONE) | (y >= _ONE)
        # a null part beside a full part: x^p + 0^p = 1 for every p
        neutral = ~positive & full
        if neutral.all():
            continue
        seen = True
        saturated = positive & full
        unbounded_lower = unbounded_lower or bool(saturated.any())
        degenerate = ~positive & ~full
        no_upper = no_upper or bool(degenerate.any())
        inner = positive & ~full
        if inner.any():
            lo, hi = _critical_exponents(x[inner], y[inner], tol, settings.bisection_max_iter)
            unbounded_lower = unbounded_lower or not np.all(np.isfinite(hi))
            his.append(hi)
            los.append(lo)
    if not seen:
        return ExponentPair(None, None)
    lower: Optional[float] = None
    if not unbounded_lower:
        lower = max((float(np.max(hi)) for hi in his), default=0.0)
    upper: Optional[float] = None
    if not no_upper and los:
        upper = min(float(np.min(lo)) for lo in los)
        if upper <= 0:
            upper = None
    logger.debug(f"estimate_exponents n={phi.n} lower={lower} upper={upper}")
    return ExponentPair(lower, upper)


def _estimate_holds(phi: SetFunction, p: float, tol: float, superadditive: bool) -> bool:
    powered = phi.values**p
    scaled = tol * max(1.0, float(powered.max()))
    for left, right in iter_disjoint_pairs(phi.n):
        joint = powered[left | right]
        parts = powered[left] + powered[right]
        if superadditive and np.any(joint < parts - scaled):
            return False
        if not superadditive and np.any(joint > parts + scaled):
            return False
    return True


def satisfies_lower_estimate(phi: SetFunction, p: float, tol: float = 1e-9) -> bool:
    """φ(A∪B)^p >= φ(A)^p + φ(B)^p on every disjoint pair"""
    return _estimate_holds(phi, p, tol, superadditive=True)


def satisfies_upper_estimate(phi: SetFunction, p: float, tol: float = 1e-9) -> bool:
    """φ(A∪B)^p <= φ(A)^p + φ(B)^p on every disjoint pair"""
    return _estimate_holds(phi, p, tol, superadditive=False)


def power(phi: SetFunction, s: float) -> SetFunction:
    if s <= 0:
        raise PreconditionError(f"power exponent must be positive, got {s}")
    return SetFunction(n=phi.n, values=phi.values**s)


def normalize(phi: SetFunction) -> SetFunction:
    if phi.total <= 0:
        raise PreconditionError("cannot normalize a set-function with φ(Ω) = 0")
    return phi.scale(1.0 / phi.total)


def restrict(phi: SetFunction, subset: Subset) -> SetFunction:
    """ψ(A) = φ(A ∩ F)"""
    phi.ground.validate_subset(subset)
    masks = np.arange(1 << phi.n, dtype=np.int64)
    return SetFunction(n=phi.n, values=phi.values[masks & subset])


def kp_constant(p: float) -> float:
    """
    K_p = 2 (2^p - 1)^{-1/p} - 1, evaluated as (1 - 2^{-p})^{-1/p} - 1 so it stays accurate as p grows
    """
    if p <= 0:
        raise PreconditionError(f"K_p needs p > 0, got {p}")
    if p == 1:
        return 1.0
    if p < 1:
        log_base = math.log(-math.expm1(-p * math.log(2.0)))
    else:
        log_base = math.log1p(-(2.0**-p))
    try:
        return math.expm1(-log_base / p)
    except OverflowError:
        raise NumericalError(f"K_p overflows for p={p}")
