# -*- coding: utf-8 -*-
"""
Extremal measures below a submeasure and above a supermeasure, the partition envelope and the equivalent measure
built from it.
"""
from typing import Any, Dict, Optional, Tuple

import numpy as np
from logzero import logger
from pydantic import validator

from setfn.base import BaseSchema, frozen_array
from setfn.config import get_settings
from setfn.exceptions import (
    BoundViolation,
    NotMonotoneError,
    NumericalError,
    PreconditionError,
    SandwichViolation,
    TooManyAtomsError,
)
from setfn.setcore import incidence_matrix, members, partition_table, subset_sums
from setfn.setfunctions import SetFunction, is_monotone, kp_constant
from setfn.solver import DEFAULT_SOLVER, LinearProgram, RawSolution, Solver
from setfn.types import AtomCount, ExtractMode, LpStatus, Mode, Subset


class AtomicMeasure(BaseSchema):
    n: AtomCount
    weights: np.ndarray

    @validator("weights", pre=True)
    def _weights(cls, weights, values):
        array = frozen_array(weights)
        n = values.get("n")
        if n is not None and array.shape != (n,):
            raise ValueError(f"expected {n} weights, got shape {array.shape}")
        if np.any(array < 0):
            raise ValueError("weights must be non-negative")
        return array

    @classmethod
    def zero(cls, n: int) -> "AtomicMeasure":
        return cls(n=n, weights=np.zeros(n))

    @property
    def total(self) -> float:
        return float(self.weights.sum())

    def __call__(self, subset: Subset) -> float:
        return float(sum(self.weights[i] for i in members(subset)))

    def table(self) -> np.ndarray:
        return subset_sums(self.weights)

    def as_setfunction(self) -> SetFunction:
        return SetFunction(n=self.n, values=self.table())

    def scale(self, factor: float) -> "AtomicMeasure":
        return AtomicMeasure(n=self.n, weights=self.weights * factor)


class LpSolution(BaseSchema):
    measure: AtomicMeasure
    objective: float
    status: LpStatus
    active_constraints: Tuple[Subset, ...] = ()
    residual: float = 0.0
    dual: Optional[np.ndarray] = None
    iterations: int = 0
    exact: bool = False

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.measure.n,
            "weights": self.measure.weights.tolist(),
            "objective": self.objective,
            "status": self.status.value,
            "residual": self.residual,
            "active": list(self.active_constraints),
        }


def _require_monotone(phi: SetFunction) -> None:
    if not is_monotone(phi):
        raise NotMonotoneError("measure extraction requires a monotone set-function")


def _solver(phi: SetFunction, solver: Solver, exact: bool, tol: Optional[float]):
    limit = get_settings().exact_max_atoms
    if exact and phi.n > limit:
        raise TooManyAtomsError(f"exact rational mode supports at most {limit} atoms, got {phi.n}")
    return solver.build(exact=exact, tol=tol)


def null_atoms(phi: SetFunction) -> Subset:
    """Union of the φ-null sets; a measure is φ-continuous iff it vanishes there"""
    union = 0
    for subset in np.nonzero(phi.values <= 0)[0]:
        union |= int(subset)
    return union


def _solution(
    phi: SetFunction, raw: RawSolution, weights: np.ndarray, objective: float, slack: np.ndarray, tol: float
) -> LpSolution:
    scale = max(1.0, float(phi.values.max()))
    residual = max(0.0, float(-slack.min()) if len(slack) else 0.0, float(-weights.min()) if len(weights) else 0.0)
    active = tuple(int(i) + 1 for i in np.nonzero(np.abs(slack) <= tol * scale)[0])
    return LpSolution(
        measure=AtomicMeasure(n=phi.n, weights=np.clip(weights, 0.0, None)),
        objective=objective,
        status=raw.status,
        active_constraints=active,
        residual=residual,
        dual=raw.y,
        iterations=raw.iterations,
        exact=raw.exact,
    )


def max_dominated_measure(
    phi: SetFunction, tol: Optional[float] = None, exact: bool = False, solver: Solver = DEFAULT_SOLVER
) -> LpSolution:
    """
    Largest total mass of a measure λ with 0 <= λ(A) <= φ(A) for every A
    """
    _require_monotone(phi)
    tol = get_settings().tol if tol is None else tol
    matrix = incidence_matrix(phi.n)
    program = LinearProgram(c=np.ones(phi.n), a=matrix, b=phi.values[1:], label="max-dominated")
    raw = _solver(phi, solver, exact, tol)(program)
    if not raw.optimal:
        return LpSolution(measure=AtomicMeasure.zero(phi.n), objective=float("nan"), status=raw.status)
    slack = phi.values[1:] - matrix @ raw.x
    return _solution(phi, raw, raw.x, raw.objective, slack, tol)


def min_dominating_measure(
    phi: SetFunction,
    enforce_continuity: bool = True,
    tol: Optional[float] = None,
    exact: bool = False,
    solver: Solver = DEFAULT_SOLVER,
) -> LpSolution:
    """
    Smallest total mass of a measure λ >= φ; with ``enforce_continuity`` λ also vanishes on the φ-null atoms
    """
    _require_monotone(phi)
    tol = get_settings().tol if tol is None else tol
    matrix = np.array(incidence_matrix(phi.n))
    if enforce_continuity:
        for atom in members(null_atoms(phi)):
            matrix[:, atom] = 0.0
    program = LinearProgram(c=-np.ones(phi.n), a=-matrix, b=-phi.values[1:], label="min-dominating")
    raw = _solver(phi, solver, exact, tol)(program)
    if not raw.optimal:
        return LpSolution(measure=AtomicMeasure.zero(phi.n), objective=float("nan"), status=raw.status)
    slack = matrix @ raw.x - phi.values[1:]
    return _solution(phi, raw, raw.x, -raw.objective, slack, tol)


def extract_measure(phi: SetFunction, mode: ExtractMode, **options: Any) -> LpSolution:
    if ExtractMode(mode) is ExtractMode.DOMINATED:
        return max_dominated_measure(phi, **options)
    return min_dominating_measure(phi, **options)


def solve_dual(
    phi: SetFunction,
    mode: ExtractMode,
    enforce_continuity: bool = True,
    exact: bool = False,
    solver: Solver = DEFAULT_SOLVER,
) -> RawSolution:
    """
    The explicit dual of either extraction problem, solved on its own.

    dominated:  minimize φ·y subject to Aᵀy >= 1, y >= 0
    dominating: maximize φ·y subject to Aᵀy <= 1, y >= 0 (rows of φ-null atoms dropped under continuity)

    ``x`` of the result holds y indexed by nonempty subset, ``objective`` the dual optimum.
    """
    _require_monotone(phi)
    matrix = incidence_matrix(phi.n)
    phi_values = phi.values[1:]
    if ExtractMode(mode) is ExtractMode.DOMINATED:
        program = LinearProgram(c=-phi_values, a=-matrix.T, b=-np.ones(phi.n), label="dual-dominated")
        raw = _solver(phi, solver, exact, None)(program)
        return raw.copy(update={"objective": -raw.objective})
    atoms = [i for i in range(phi.n) if not (enforce_continuity and null_atoms(phi) >> i & 1)]
    transposed = matrix.T[atoms] if atoms else np.zeros((0, len(phi_values)))
    program = LinearProgram(c=phi_values, a=transposed, b=np.ones(len(atoms)), label="dual-dominating")
    return _solver(phi, solver, exact, None)(program)


def check_kp_bound(solution: LpSolution, p: float, mode: ExtractMode, tol: float = 1e-9) -> float:
    """
    Raise BoundViolation when the optimum contradicts the K_p bound; returns K_p
    """
    kp = kp_constant(p)
    if not solution.optimal:
        raise NumericalError(f"LP finished with status {solution.status.value}")
    if ExtractMode(mode) is ExtractMode.DOMINATED and solution.objective < kp - tol:
        raise BoundViolation(f"dominated mass {solution.objective} below K_{p} = {kp}")
    if ExtractMode(mode) is ExtractMode.DOMINATING and solution.objective > kp + tol:
        raise BoundViolation(f"dominating mass {solution.objective} above K_{p} = {kp}")
    return kp


def envelope_supermeasure(phi: SetFunction, q: float) -> SetFunction:
    """
    ψ(A) = max over partitions {A_k} of A of Σ φ(A_k)^q
    """
    if q < 1:
        raise PreconditionError(f"envelope exponent must satisfy q >= 1, got {q}")
    _require_monotone(phi)
    table, _ = partition_table(phi.values**q, Mode.MAX)
    return SetFunction(n=phi.n, values=table)


def equivalent_measure(phi: SetFunction, q: float, c: float, tol: Optional[float] = None) -> AtomicMeasure:
    """
    Measure with the same null sets as φ, for a submeasure satisfying φ(∪A_k) >= c (Σ φ(A_k)^q)^{1/q}.
    """
    tol = get_settings().tol if tol is None else tol
    if not 0 < c <= 1:
        raise PreconditionError(f"crude lower estimate constant must lie in (0, 1], got {c}")
    psi = envelope_supermeasure(phi, q)
    powered = phi.values**q
    scale = tol * max(1.0, float(psi.values.max()))
    below = np.nonzero(c**q * psi.values > powered + scale)[0]
    if len(below):
        raise SandwichViolation(int(below[0]), f"c^q ψ exceeds φ^q for c={c}, q={q}")
    if psi.total <= 0:
        return AtomicMeasure.zero(phi.n)
    solution = min_dominating_measure(psi.scale(1.0 / psi.total), enforce_continuity=True, tol=tol)
    if not solution.optimal:
        raise NumericalError(f"dominating LP for the envelope finished with status {solution.status.value}")
    logger.debug(f"equivalent_measure n={phi.n} q={q} c={c} mass={solution.objective:.6g}")
    return solution.measure.scale(psi.total)


def check_equivalence(phi: SetFunction, mu: AtomicMeasure, tol: float = 0.0) -> bool:
    """Identical null sets"""
    if phi.n != mu.n:
        raise PreconditionError(f"ground sets differ: {phi.n} atoms against {mu.n}")
    return bool(np.array_equal(phi.values <= tol, mu.table() <= tol))
