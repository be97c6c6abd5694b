# -*- coding: utf-8 -*-
"""
Decreasing rearrangements and the Lorentz quasi-norms L_{p,q}, L_{p,∞} and Λ_{p,q}.

Λ_{p,q} is a supremum over partitions when p < q and an infimum when q < p. Both have a breakpoint DP on the
rearrangement and a brute-force partition form on small atomic spaces; the latter is the oracle for the former.
"""
import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import validator

from setfn.base import BaseSchema
from setfn.exceptions import PreconditionError, TooManyAtomsError, WrongRegimeError
from setfn.measures import AtomicMeasure
from setfn.setcore import enumerate_partitions, members
from setfn.types import Exponent
from setfn.utils import make_rng

PARTITION_MAX_ATOMS = 6


class StepFunction(BaseSchema):
    """f*(t) = values[j] on [T_{j-1}, T_j)"""

    steps: Tuple[Tuple[float, float], ...]

    @validator("steps", pre=True)
    def _steps(cls, steps):
        steps = tuple((float(value), float(mass)) for value, mass in steps)
        for value, mass in steps:
            if not (math.isfinite(value) and math.isfinite(mass)):
                raise ValueError("step values and masses must be finite")
            if value < 0 or mass <= 0:
                raise ValueError(f"step ({value}, {mass}) needs value >= 0 and mass > 0")
        for (left, _), (right, _) in zip(steps, steps[1:]):
            if right >= left:
                raise ValueError("step values must be strictly decreasing")
        return steps

    @property
    def values(self) -> np.ndarray:
        return np.array([value for value, _ in self.steps], dtype=float)

    @property
    def masses(self) -> np.ndarray:
        return np.array([mass for _, mass in self.steps], dtype=float)

    @property
    def breakpoints(self) -> np.ndarray:
        """T_0 = 0 < T_1 < ... < T_m"""
        return np.concatenate(([0.0], np.cumsum(self.masses)))

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum())

    def __len__(self) -> int:
        return len(self.steps)

    def scale(self, factor: float) -> "StepFunction":
        if factor <= 0:
            raise PreconditionError(f"scale factor must be positive, got {factor}")
        return StepFunction(steps=[(value * factor, mass) for value, mass in self.steps])

    def __call__(self, t: float) -> float:
        index = int(np.searchsorted(self.breakpoints, t, side="right")) - 1
        return float(self.values[index]) if 0 <= index < len(self.steps) else 0.0


class LorentzParams(BaseSchema):
    p: Exponent
    q: Exponent

    @property
    def sup_regime(self) -> bool:
        return self.p < self.q

    @property
    def ratio(self) -> float:
        return self.q / self.p


def _params(prm: Union[LorentzParams, Tuple[float, float]]) -> LorentzParams:
    return prm if isinstance(prm, LorentzParams) else LorentzParams(p=prm[0], q=prm[1])


def rearrange(f: Sequence[float], mu: AtomicMeasure, pad_zero: bool = False) -> StepFunction:
    """
    Decreasing rearrangement of |f|; with ``pad_zero`` a trailing zero step carries the mass where f vanishes
    """
    magnitudes = np.abs(np.asarray(f, dtype=float))
    if magnitudes.shape != (mu.n,):
        raise PreconditionError(f"function has {magnitudes.size} entries, measure has {mu.n} atoms")
    steps: List[Tuple[float, float]] = []
    for value in sorted(set(magnitudes[(magnitudes > 0) & (mu.weights > 0)].tolist()), reverse=True):
        steps.append((value, float(mu.weights[magnitudes == value].sum())))
    if pad_zero:
        rest = float(mu.weights[magnitudes == 0].sum())
        if rest > 0:
            steps.append((0.0, rest))
    return StepFunction(steps=steps)


def lpq_norm(fstar: StepFunction, prm: Union[LorentzParams, Tuple[float, float]]) -> float:
    """(Σ v_j^q (T_j^{q/p} - T_{j-1}^{q/p}))^{1/q}"""
    prm = _params(prm)
    if not len(fstar):
        return 0.0
    powered = fstar.breakpoints ** prm.ratio
    return float(np.sum(fstar.values**prm.q * np.diff(powered)) ** (1.0 / prm.q))


def lpq_norm_distribution(fstar: StepFunction, prm: Union[LorentzParams, Tuple[float, float]]) -> float:
    """
    Same quasi-norm through the distribution function, (∫ q t^{q-1} μ(|f| > t)^{q/p} dt)^{1/q}
    """
    prm = _params(prm)
    if not len(fstar):
        return 0.0
    levels = np.append(fstar.values, 0.0) ** prm.q
    mass_above = fstar.breakpoints[1:] ** prm.ratio
    return float(np.sum(mass_above * (levels[:-1] - levels[1:])) ** (1.0 / prm.q))


def lp_weak_norm(fstar: StepFunction, p: float) -> float:
    """max_j v_j T_j^{1/p}"""
    if p <= 0:
        raise PreconditionError(f"weak L_p needs p > 0, got {p}")
    if not len(fstar):
        return 0.0
    return float(np.max(fstar.values * fstar.breakpoints[1:] ** (1.0 / p)))


def _require_sup(prm: LorentzParams) -> None:
    if not prm.p < prm.q:
        raise WrongRegimeError(f"Λ supremum form needs p < q, got p={prm.p}, q={prm.q}")


def _require_inf(prm: LorentzParams) -> None:
    if not prm.q < prm.p:
        raise WrongRegimeError(f"Λ infimum form needs q < p, got p={prm.p}, q={prm.q}")


def lambda_sup_norm(fstar: StepFunction, prm: Union[LorentzParams, Tuple[float, float]]) -> float:
    """
    Supremum over breakpoint chains of Σ f*(τ_j^-)^q (τ_j - τ_{j-1})^{q/p}, to the power 1/q.

    best[k] is the optimum over chains ending at T_k; the left limit at T_k is v_k.
    """
    prm = _params(prm)
    _require_sup(prm)
    m = len(fstar)
    if not m:
        return 0.0
    breaks = fstar.breakpoints
    heads = fstar.values**prm.q
    best = np.zeros(m + 1)
    for k in range(1, m + 1):
        gaps = (breaks[k] - breaks[:k]) ** prm.ratio
        best[k] = np.max(best[:k] + heads[k - 1] * gaps)
    return float(best[1:].max() ** (1.0 / prm.q))


def lambda_inf_norm(fstar: StepFunction, prm: Union[LorentzParams, Tuple[float, float]]) -> float:
    """
    Infimum over breakpoint chains 0 = τ_0 < ... < τ_k = T_m of Σ f*(τ_{j-1})^q (τ_j - τ_{j-1})^{q/p}, to 1/q.

    Pass a zero-padded rearrangement so the chain ends at the total mass of the space.
    """
    prm = _params(prm)
    _require_inf(prm)
    m = len(fstar)
    if not m:
        return 0.0
    breaks = fstar.breakpoints
    heads = fstar.values**prm.q
    best = np.zeros(m + 1)
    for k in range(1, m + 1):
        gaps = (breaks[k] - breaks[:k]) ** prm.ratio
        best[k] = np.min(best[:k] + heads[:k] * gaps)
    return float(best[m] ** (1.0 / prm.q))


def _partition_extremum(f: Sequence[float], mu: AtomicMeasure, prm: LorentzParams, sup: bool) -> float:
    magnitudes = np.abs(np.asarray(f, dtype=float))
    if mu.n > PARTITION_MAX_ATOMS:
        raise TooManyAtomsError(f"partition forms enumerate at most {PARTITION_MAX_ATOMS} atoms, got {mu.n}")
    if magnitudes.shape != (mu.n,):
        raise PreconditionError(f"function has {magnitudes.size} entries, measure has {mu.n} atoms")
    if sup:
        carrier = sum(1 << i for i in range(mu.n) if magnitudes[i] > 0)
    else:
        carrier = (1 << mu.n) - 1
    if not carrier or not magnitudes.any():
        return 0.0

    def score(block: int) -> float:
        atoms = members(block)
        level = magnitudes[atoms].min() if sup else magnitudes[atoms].max()
        return level**prm.q * mu.weights[atoms].sum() ** prm.ratio

    totals = [sum(score(block) for block in partition.blocks) for partition in enumerate_partitions(carrier)]
    return float((max(totals) if sup else min(totals)) ** (1.0 / prm.q))


def lambda_sup_norm_partition(
    f: Sequence[float], mu: AtomicMeasure, prm: Union[LorentzParams, Tuple[float, float]]
) -> float:
    """sup over partitions {A_i} of supp f of Σ (inf_{A_i} |f|)^q μ(A_i)^{q/p}, to the power 1/q"""
    prm = _params(prm)
    _require_sup(prm)
    return _partition_extremum(f, mu, prm, sup=True)


def lambda_inf_norm_partition(
    f: Sequence[float], mu: AtomicMeasure, prm: Union[LorentzParams, Tuple[float, float]]
) -> float:
    """inf over partitions {A_i} of Ω of Σ (sup_{A_i} |f|)^q μ(A_i)^{q/p}, to the power 1/q"""
    prm = _params(prm)
    _require_inf(prm)
    return _partition_extremum(f, mu, prm, sup=False)


def comparison_constants(prm: Union[LorentzParams, Tuple[float, float]]) -> Tuple[float, float]:
    """
    (lower, upper) with lower·Λ_{p,q} <= L_{p,q} <= upper·Λ_{p,q}.

    p < q: (1, ((1+θ)^{2(1+θ)} θ^{-θ})^{1/q}), θ = q/p - 1
    q < p: (((1+θ)^{-2-θ} θ^θ)^{1/p}, 1), θ = p/q - 1
    """
    prm = _params(prm)
    if prm.p == prm.q:
        raise WrongRegimeError("comparison constants need p != q")
    if prm.p < prm.q:
        theta = prm.q / prm.p - 1.0
        upper = math.exp((2.0 * (1.0 + theta) * math.log1p(theta) - theta * math.log(theta)) / prm.q)
        return 1.0, upper
    theta = prm.p / prm.q - 1.0
    lower = math.exp(((-2.0 - theta) * math.log1p(theta) + theta * math.log(theta)) / prm.p)
    return lower, 1.0


def lorentz_norm(fstar: StepFunction, prm: Union[LorentzParams, Tuple[float, float]]) -> float:
    """Λ_{p,q} in whichever regime (p, q) selects"""
    prm = _params(prm)
    return lambda_sup_norm(fstar, prm) if prm.sup_regime else lambda_inf_norm(fstar, prm)


def random_step_function(seed: int, *keys, max_steps: int = 8, rng: Optional[np.random.Generator] = None) -> StepFunction:
    """
    1..max_steps steps, values log-uniform in [1e-2, 1e2], masses uniform in (0, 2]
    """
    rng = rng or make_rng(seed, "steps", *keys)
    m = int(rng.integers(1, max_steps + 1))
    values = np.sort(10.0 ** rng.uniform(-2.0, 2.0, size=m))[::-1]
    values = np.unique(values)[::-1]
    masses = 2.0 - rng.uniform(0.0, 2.0, size=len(values))
    return StepFunction(steps=list(zip(values.tolist(), masses.tolist())))
