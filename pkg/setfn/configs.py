# -*- coding: utf-8 -*-
"""
Per-command run configurations. Validators reject parameters outside an operation's contract before anything runs.
"""
from pathlib import Path
from typing import List, Optional

from pydantic import Field, confloat, conint, root_validator, validator

from setfn.base import BaseSchema
from setfn.types import (
    AtomCount,
    ConvexityKind,
    Exponent,
    ExtractMode,
    LorentzForm,
    OutputFormat,
    Seed,
    Side,
    SubmeasureFamily,
    Tolerance,
)


class RunConfig(BaseSchema):
    input: Optional[Path] = Field(None, description="JSON input, one object or an array; generated when omitted")
    trials: conint(ge=1) = Field(20, description="number of generated instances")  # type: ignore[valid-type]
    seed: Seed = Field(0, description="root seed; instance i uses hash(seed, command, i)")
    tol: Tolerance = Field(1e-9, description="comparison slack")
    n: AtomCount = Field(4, description="atoms of generated instances")
    format: OutputFormat = Field(OutputFormat.JSON, description="report format")
    output: Optional[Path] = Field(None, description="report file, stdout when omitted")
    workers: conint(ge=1) = Field(1, description="parallel instances; SETFN_WORKERS wins")  # type: ignore[valid-type]
    timing: bool = Field(False, description="record wall time per instance (reports stop being byte-reproducible)")


class CheckConfig(RunConfig):
    p: confloat(gt=1) = Field(1.5, description="lower estimate exponent of generated submeasures")  # type: ignore
    family: SubmeasureFamily = Field(SubmeasureFamily.PERTURB, description="generated submeasure family")


class ExponentsConfig(CheckConfig):
    pass


class ExtractConfig(RunConfig):
    mode: ExtractMode = Field(ExtractMode.DOMINATED, description=ExtractMode.help_text())
    continuity: bool = Field(False, description="dominating measure must vanish on φ-null atoms")
    exact: bool = Field(False, description="rational simplex (small n only)")
    p: Optional[Exponent] = Field(None, description="estimate exponent; checks the K_p mass bound when given")

    @root_validator(skip_on_failure=True)
    def _exponent(cls, values):
        mode, p, generated = values["mode"], values.get("p"), values.get("input") is None
        if p is None and generated:
            p = 1.5 if mode is ExtractMode.DOMINATED else 0.6
        if p is not None:
            # generated instances need the strict inequality
            if mode is ExtractMode.DOMINATED and (p < 1 or generated and p == 1):
                raise ValueError(f"dominated extraction needs a lower p-estimate with p >= 1, got {p}")
            if mode is ExtractMode.DOMINATING and (p > 1 or generated and p == 1):
                raise ValueError(f"dominating extraction needs an upper p-estimate with p <= 1, got {p}")
        values["p"] = p
        return values


class EnvelopeConfig(RunConfig):
    q: confloat(ge=1) = Field(2.0, description="envelope exponent")  # type: ignore[valid-type]
    c: confloat(gt=0, le=1) = Field(1.0, description="crude lower q-estimate constant of the input")  # type: ignore


class KpConfig(RunConfig):
    p: Exponent = Field(..., description="exponent of K_p = 2(2^p - 1)^{-1/p} - 1")


class LorentzConfig(RunConfig):
    p: Exponent = Field(1.0, description="first Lorentz index")
    q: Exponent = Field(2.0, description="second Lorentz index")
    form: LorentzForm = Field(LorentzForm.INTEGRAL, description=LorentzForm.help_text())

    @root_validator(skip_on_failure=True)
    def _regime(cls, values):
        p, q, form = values["p"], values["q"], values["form"]
        if form is LorentzForm.LAMBDA_SUP and not p < q:
            raise ValueError(f"lambda-sup needs p < q, got p={p}, q={q}")
        if form is LorentzForm.LAMBDA_INF and not q < p:
            raise ValueError(f"lambda-inf needs q < p, got p={p}, q={q}")
        return values


class _ExponentPair(RunConfig):
    p: Exponent = Field(1.0, description="upper estimate exponent")
    q: Exponent = Field(2.0, description="lower estimate exponent")
    a: Optional[confloat(ge=1)] = Field(None, description="crude upper constant, analytic when omitted")  # type: ignore
    b: Optional[confloat(ge=1)] = Field(None, description="crude lower constant, analytic when omitted")  # type: ignore
    samples: conint(ge=1) = Field(100, description="sampled vectors per instance")  # type: ignore[valid-type]

    @validator("q")
    def _ordered(cls, q, values):
        p = values.get("p")
        if p is not None and not p < q:
            raise ValueError(f"needs 0 < p < q, got p={p}, q={q}")
        return q


class RenormConfig(_ExponentPair):
    pass


class LatticeConfig(_ExponentPair):
    n: AtomCount = Field(3, description="atoms of generated instances")
    side: Side = Field(Side.LOWER, description=Side.help_text())
    f: Optional[List[float]] = Field(None, description="non-negative f, normalized to ‖f‖_X = 1; all ones by default")

    @validator("f")
    def _non_negative(cls, f):
        if f is not None and (any(value < 0 for value in f) or not any(f)):
            raise ValueError("f must be non-negative and not identically zero")
        return f


class ConvexityConfig(RunConfig):
    kind: ConvexityKind = Field(ConvexityKind.CONVEXITY, description=ConvexityKind.help_text())
    r: confloat(ge=0) = Field(1.0, description="convexity / concavity exponent")  # type: ignore[valid-type]
    budget: conint(ge=1) = Field(200, description="norm-ratio evaluations per instance")  # type: ignore[valid-type]
    theta: Optional[confloat(gt=0, lt=1)] = Field(  # type: ignore[valid-type]
        None, description="generate Λ_{1,1+θ} and check against exp(θ(c* + |log θ|))"
    )
    c_star: Optional[confloat(gt=0)] = Field(None, description="calibration constant, SETFN_C_STAR by default")  # type: ignore

    @root_validator(skip_on_failure=True)
    def _exponent(cls, values):
        kind, r = values["kind"], values["r"]
        if kind is not ConvexityKind.GEOMETRIC and r <= 0:
            raise ValueError(f"{kind.value} needs r > 0")
        if values.get("theta") is not None:
            if kind is ConvexityKind.CONCAVITY:
                raise ValueError("the theta bound applies to convexity constants only")
            if kind is ConvexityKind.CONVEXITY and r >= 1:
                raise ValueError(f"the theta bound on Λ_(1,1+θ) needs r < 1, got r={r}")
        return values


class SharpnessConfig(RunConfig):
    theta: List[confloat(gt=0, lt=1)] = Field(  # type: ignore[valid-type]
        [0.2, 0.1, 0.05], description="θ values of the step-function family in Λ_{1,1+θ}"
    )
    grid: conint(ge=1000) = Field(10_000, description="geometric cells before interpolation")  # type: ignore


class FactorizeConfig(RunConfig):
    n: conint(ge=1, le=8) = Field(4, description="domain atoms of generated operators")  # type: ignore[valid-type]
    m: conint(ge=1, le=6) = Field(3, description="codomain atoms of generated operators")  # type: ignore[valid-type]
    p: Optional[Exponent] = Field(None, description="interpolation exponent, (r + q)/2 by default")
    samples: conint(ge=1) = Field(100, description="sampled f per operator")  # type: ignore[valid-type]


class VerifyConfig(FactorizeConfig):
    samples: conint(ge=1) = Field(1000, description="sampled f per operator")  # type: ignore[valid-type]


class SelftestConfig(RunConfig):
    trials: conint(ge=1) = Field(200, description="instances per acceptance cell (capped per criterion)")  # type: ignore
