# -*- coding: utf-8 -*-
"""
Lower bounds for the convexity constants M^(r), M_(p) and M^(0) of a quasi-norm by seeded search, the analytic bound
they are checked against, and the step-function family on which Λ_{1,1+θ} loses convexity.
"""
import math
from typing import Callable, List, Optional, Tuple

import numpy as np
from logzero import logger
from pydantic import validator

from setfn.base import BaseSchema, frozen_array
from setfn.config import get_settings
from setfn.exceptions import PreconditionError
from setfn.lorentz import StepFunction, lambda_sup_norm
from setfn.quasinorm import QuasiNormSpec
from setfn.types import ConvexityKind
from setfn.utils import derive_seed, make_rng, run_ordered

KEEP_PROBABILITY = 0.7
ASCENT_FACTORS = (0.0, 0.5, 2.0)
UNRESOLVED_GAP = 1e-12


class ConvexityEstimate(BaseSchema):
    kind: ConvexityKind
    r: float
    lower_bound: float
    witness: np.ndarray
    budget_used: int
    seed: int
    workers: int = 1

    @validator("witness", pre=True)
    def _witness(cls, witness):
        return frozen_array(witness, ndim=2)

    def reevaluate(self, spec: QuasiNormSpec) -> float:
        return convexity_ratio(spec, self.witness, self.kind, self.r)


def convexity_ratio(spec: QuasiNormSpec, family, kind: ConvexityKind, r: float = 1.0) -> float:
    """
    The defining ratio of the constant for the rows of ``family``:

    convexity  ‖(Σ|f_i|^r)^{1/r}‖ / (Σ‖f_i‖^r)^{1/r}
    concavity  (Σ‖f_i‖^r)^{1/r} / ‖(Σ|f_i|^r)^{1/r}‖
    geometric  ‖Π|f_i|^{1/k}‖ / (Π‖f_i‖)^{1/k}

    A vanishing denominator gives 0.
    """
    kind = ConvexityKind(kind)
    family = np.abs(np.atleast_2d(np.asarray(family, dtype=float)))
    norms = np.array([spec(row) for row in family])
    if kind is ConvexityKind.GEOMETRIC:
        k = len(family)
        top = spec(np.prod(family, axis=0) ** (1.0 / k))
        bottom = float(np.prod(norms ** (1.0 / k)))
    else:
        mixed = spec(np.sum(family**r, axis=0) ** (1.0 / r))
        summed = float(np.sum(norms**r) ** (1.0 / r))
        top, bottom = (mixed, summed) if kind is ConvexityKind.CONVEXITY else (summed, mixed)
    return top / bottom if bottom > 0 else 0.0


def coordinate_ascent(
    objective: Callable[[np.ndarray], float],
    start: np.ndarray,
    budget: int,
    bounds: Optional[np.ndarray] = None,
    signed: bool = False,
) -> Tuple[float, np.ndarray, int]:
    """
    Greedy single-entry moves (scale by 0, 1/2, 2; flip sign when ``signed``), first improvement accepted,
    until a full sweep improves nothing or ``budget`` evaluations are spent. Moves are clipped to ±bounds.
    """
    x = np.array(start, dtype=float)
    value = objective(x)
    used = 1
    improved = True
    while improved and used < budget:
        improved = False
        for index in np.ndindex(*x.shape):
            current = x[index]
            moves = [current * factor for factor in ASCENT_FACTORS] if current else [1.0]
            if signed:
                moves.append(-current if current else -1.0)
            for move in moves:
                if bounds is not None:
                    move = float(np.clip(move, -bounds[index], bounds[index]))
                if move == current:
                    continue
                if used >= budget:
                    return value, x, used
                trial = x.copy()
                trial[index] = move
                score = objective(trial)
                used += 1
                if score > value:
                    value, x, improved = score, trial, True
                    break
    return value, x, used


def _random_family(n: int, rng: np.random.Generator) -> np.ndarray:
    k = int(rng.integers(1, 2 * n + 1))
    return rng.exponential(size=(k, n)) * (rng.random((k, n)) < KEEP_PROBABILITY)


def _search_shard(
    spec: QuasiNormSpec, kind: ConvexityKind, r: float, budget: int, seed: int
) -> Tuple[float, np.ndarray, int]:
    rng = make_rng(seed, "convexity", kind.value)

    def objective(family: np.ndarray) -> float:
        return convexity_ratio(spec, family, kind, r)

    best = np.ones((1, spec.n))
    value = objective(best)
    used = 1
    random_budget = max(budget // 2, 1)
    while used < random_budget:
        family = _random_family(spec.n, rng)
        score = objective(family)
        used += 1
        if score > value:
            value, best = score, family
    if used < budget:
        refined, candidate, spent = coordinate_ascent(objective, best, budget - used)
        used += spent
        if refined > value:
            value, best = refined, candidate
    return value, best, used


def _estimate(spec: QuasiNormSpec, kind: ConvexityKind, r: float, budget: int, seed: int, workers: Optional[int]):
    if budget < 1:
        raise PreconditionError(f"search budget must be at least 1, got {budget}")
    workers = max(1, min(workers or get_settings().workers, budget))
    shares = [budget // workers + (index < budget % workers) for index in range(workers)]

    def run(index: int) -> Tuple[float, np.ndarray, int]:
        return _search_shard(spec, kind, r, shares[index], derive_seed(seed, "shard", index))

    results = run_ordered(run, list(range(workers)), workers)
    # ties resolve to the lowest shard
    value, witness, _ = max(results, key=lambda result: result[0])
    used = sum(result[2] for result in results)
    logger.debug(f"{kind.value} search on {spec.kind}: r={r} lower bound {value:.9g} after {used} evaluations")
    return ConvexityEstimate(
        kind=kind, r=r, lower_bound=value, witness=witness, budget_used=used, seed=seed, workers=workers
    )


def estimate_convexity(
    spec: QuasiNormSpec, r: float, budget: int = 200, seed: int = 0, workers: Optional[int] = None
) -> ConvexityEstimate:
    """Certified lower bound on M^(r)"""
    if r <= 0:
        raise PreconditionError(f"r-convexity needs r > 0, got {r}; use estimate_geo_convexity for r = 0")
    return _estimate(spec, ConvexityKind.CONVEXITY, r, budget, seed, workers)


def estimate_concavity(
    spec: QuasiNormSpec, p: float, budget: int = 200, seed: int = 0, workers: Optional[int] = None
) -> ConvexityEstimate:
    """Certified lower bound on M_(p)"""
    if p <= 0:
        raise PreconditionError(f"p-concavity needs p > 0, got {p}")
    return _estimate(spec, ConvexityKind.CONCAVITY, p, budget, seed, workers)


def estimate_geo_convexity(
    spec: QuasiNormSpec, budget: int = 200, seed: int = 0, workers: Optional[int] = None
) -> ConvexityEstimate:
    """Certified lower bound on M^(0)"""
    return _estimate(spec, ConvexityKind.GEOMETRIC, 0.0, budget, seed, workers)


def estimate_constant(
    kind: ConvexityKind, spec: QuasiNormSpec, r: float, budget: int = 200, seed: int = 0, workers: Optional[int] = None
) -> ConvexityEstimate:
    kind = ConvexityKind(kind)
    if kind is ConvexityKind.GEOMETRIC:
        return estimate_geo_convexity(spec, budget, seed, workers)
    if kind is ConvexityKind.CONCAVITY:
        return estimate_concavity(spec, r, budget, seed, workers)
    return estimate_convexity(spec, r, budget, seed, workers)


def convexity_bound(r: float, p: float, theta: float, c: float) -> float:
    """
    exp(θ(c + |log θ|/p)), the upper bound on M^(r) of a space that is θ-close to L_p; r = 0 is M^(0)
    """
    if not 0 <= r < p:
        raise PreconditionError(f"the bound needs 0 <= r < p, got r={r}, p={p}")
    if not 0 < theta < 1:
        raise PreconditionError(f"theta must lie in (0, 1), got {theta}")
    if c <= 0:
        raise PreconditionError(f"c must be positive, got {c}")
    return math.exp(theta * (c + abs(math.log(theta)) / p))


class SharpnessRecord(BaseSchema):
    theta: float
    q: float
    grid: int
    cells: int
    resolved: bool
    phi: float
    psi: float
    psi_minus_one: float
    beta: float
    lambda_norm: float
    lambda_norm_q: float
    analytic_bound: float
    kappa_lower: float
    log_kappa: float
    log_ratio: float
    exponent_ratio: float


def _sharpness_constants(theta: float) -> Tuple[float, float, float, float]:
    """q, φ, ψ - 1 and β, kept accurate for θ far below machine epsilon"""
    q = 1.0 + theta
    phi = math.exp(-math.sqrt(abs(math.log(theta))))
    # 2^{1/q} - 1 = 1 + u
    u = 2.0 * math.expm1(-math.log(2.0) * theta / q)
    psi_minus_one = math.expm1(-2.0 * math.log1p(u))
    beta = 1.0 + (1.0 - phi) / phi * math.log1p(-phi)
    return q, phi, psi_minus_one, beta


def _cells(phi: float, log_psi: float, grid: int) -> Tuple[np.ndarray, bool]:
    """
    log τ_j for the geometric grid τ_j = (1-φ)^{1-j/grid}, with (τ_jτ_{j-1})^{1/2} interpolated wherever
    τ_j > ψτ_{j-1}, up to twice the grid size
    """
    cap = 2 * grid
    logs = (1.0 - np.arange(grid + 1) / grid) * math.log1p(-phi)
    while True:
        gaps = np.diff(logs)
        wide = np.nonzero((gaps > log_psi) & (gaps > UNRESOLVED_GAP))[0]
        if not len(wide):
            return logs, True
        room = cap + 1 - len(logs)
        if room <= 0:
            return logs, False
        wide = wide[:room]
        logs = np.sort(np.concatenate((logs, logs[wide] + gaps[wide] / 2.0)))


def sharpness_example(theta: float, grid: int = 10_000) -> SharpnessRecord:
    """
    f(t) = 1/t on [1-φ, 1] in X = Λ_{1,1+θ}: its norm, the analytic upper estimate and the lower estimate of the
    convexity constant it forces
    """
    if not 0 < theta < 1:
        raise PreconditionError(f"theta must lie in (0, 1), got {theta}")
    if grid < 1000:
        raise PreconditionError(f"grid must be at least 1000 cells, got {grid}")
    q, phi, psi_minus_one, beta = _sharpness_constants(theta)
    log_psi = math.log1p(psi_minus_one)
    logs, resolved = _cells(phi, log_psi, grid)
    taus = np.exp(logs)
    fstar = StepFunction(steps=list(zip((1.0 / taus[1:]).tolist(), np.diff(taus).tolist())))
    if q > 1.0:
        norm = lambda_sup_norm(fstar, (1.0, q))
    else:
        # 1 + θ rounds to 1: Λ_{1,1} is the integral of f*
        norm = float(np.sum(fstar.values * fstar.masses))
    log_abs = math.log(-math.log1p(-phi))
    log_kappa = beta + math.log(phi) - theta / q * math.log(psi_minus_one) - log_abs / q
    log_theta = abs(math.log(theta))
    if not resolved:
        logger.warning(f"sharpness grid for theta={theta} hit the cell cap before every cell ratio dropped below ψ")
    return SharpnessRecord(
        theta=theta,
        q=q,
        grid=grid,
        cells=len(taus) - 1,
        resolved=resolved,
        phi=phi,
        psi=1.0 + psi_minus_one,
        psi_minus_one=psi_minus_one,
        beta=beta,
        lambda_norm=norm,
        lambda_norm_q=norm**q,
        analytic_bound=psi_minus_one**theta * -math.log1p(-phi),
        kappa_lower=math.exp(log_kappa),
        log_kappa=log_kappa,
        log_ratio=log_kappa / (theta * log_theta),
        exponent_ratio=(math.log(phi) - math.log(psi_minus_one)) / log_theta,
    )


def sharpness_sweep(thetas: List[float], grid: int = 10_000, workers: int = 1) -> List[SharpnessRecord]:
    return run_ordered(lambda theta: sharpness_example(theta, grid), thetas, workers)
