# -*- coding: utf-8 -*-
"""
The laboratory's commands.

Every command reads its instances from ``--input`` or draws ``--trials`` of them from per-instance seeds, runs one
operation per instance and reports it as a ReportRecord whose ``key`` quantity is checked against ``bound``.
"""
from typing import Any, Callable, Dict, List, Optional, Tuple, TypeVar

import numpy as np
from logzero import logger

from setfn import lattice
from setfn.configs import (
    CheckConfig,
    ConvexityConfig,
    EnvelopeConfig,
    ExponentsConfig,
    ExtractConfig,
    FactorizeConfig,
    KpConfig,
    LatticeConfig,
    LorentzConfig,
    RenormConfig,
    RunConfig,
    SelftestConfig,
    SharpnessConfig,
    VerifyConfig,
)
from setfn.context import RunContext
from setfn.convexity import convexity_bound, estimate_constant, sharpness_sweep
from setfn.exceptions import NumericalError, PreconditionError
from setfn.factorization import OperatorSpec, factorization_measure, verify_conditions
from setfn.generators import (
    power_of_measure,
    random_norm,
    random_operator,
    random_submeasure_lower_p,
    random_supermeasure_upper_p,
    random_weights,
)
from setfn.loaders import load_instances
from setfn.lorentz import (
    StepFunction,
    comparison_constants,
    lambda_inf_norm,
    lambda_sup_norm,
    lp_weak_norm,
    lpq_norm,
    lpq_norm_distribution,
    random_step_function,
)
from setfn.measures import check_equivalence, envelope_supermeasure, equivalent_measure, extract_measure
from setfn.quasinorm import LorentzLambda, QuasiNormSpec, WeightedLs, parse_spec
from setfn.quasinorm import renorm as renorm_spec
from setfn.reports import ReportRecord
from setfn.selftest import run_selftest
from setfn.service import command
from setfn.setfunctions import ClassificationReport, SetFunction, classify, estimate_exponents, kp_constant, power
from setfn.types import ConvexityKind, ExtractMode, LorentzForm, Sense, Side, SupermeasureFamily

T = TypeVar("T")
EXPONENT_SLACK = 1e-6


def _instances(config: RunConfig, parse: Callable[[Any], T]) -> List[Tuple[str, Optional[T]]]:
    """(id, instance) from --input, or (id, None) placeholders the command fills from the instance seed"""
    if config.input is not None:
        return load_instances(config.input, parse)
    return [(f"generated[{index}]", None) for index in range(config.trials)]


def _flag(value: bool) -> float:
    return 1.0 if value else 0.0


def _classification(report: ClassificationReport) -> Dict[str, Optional[float]]:
    return {
        "monotone": _flag(report.monotone),
        "submeasure": _flag(report.submeasure),
        "supermeasure": _flag(report.supermeasure),
        "measure": _flag(report.measure),
        "normalized": _flag(report.normalized),
        "best_lower_exponent": report.best_lower_exponent,
        "best_upper_exponent": report.best_upper_exponent,
        "violations": float(len(report.witness_violations)),
    }


class Laboratory:
    @command(
        "check",
        CheckConfig,
        help="classify set-functions: monotone, submeasure, supermeasure, measure, normalized",
    )
    def check(self, config: CheckConfig, context: RunContext) -> List[ReportRecord]:
        def run(index: int, item: Tuple[str, Optional[SetFunction]]) -> ReportRecord:
            id, phi = item
            generated = phi is None
            if phi is None:
                phi = random_submeasure_lower_p(config.n, config.p, context.instance_seed(index), config.family)
            report = classify(phi, config.tol)
            # generated instances must come out as submeasures, files only need to be monotone
            key = "submeasure" if generated else "monotone"
            return context.record(id, {"n": phi.n}, _classification(report), key, 1.0, Sense.EQ, slack=0.0)

        return context.run_instances(run, _instances(config, SetFunction.parse_obj))

    @command(
        "exponents",
        ExponentsConfig,
        help="least lower and greatest upper estimate exponents of monotone set-functions",
    )
    def exponents(self, config: ExponentsConfig, context: RunContext) -> List[ReportRecord]:
        def run(index: int, item: Tuple[str, Optional[SetFunction]]) -> ReportRecord:
            id, phi = item
            generated = phi is None
            if phi is None:
                phi = random_submeasure_lower_p(config.n, config.p, context.instance_seed(index), config.family)
            lower, upper = estimate_exponents(phi)
            measured = {"lower": lower, "upper": upper}
            if not generated:
                return context.record(id, {"n": phi.n}, measured)
            return context.record(
                id, {"n": phi.n, "p": config.p}, measured, "lower", config.p, slack=max(config.tol, EXPONENT_SLACK)
            )

        return context.run_instances(run, _instances(config, SetFunction.parse_obj))

    @command(
        "extract",
        ExtractConfig,
        help="largest dominated measure λ <= φ or smallest dominating measure λ >= φ, with the K_p mass bound",
    )
    def extract(self, config: ExtractConfig, context: RunContext) -> List[ReportRecord]:
        dominated = config.mode is ExtractMode.DOMINATED

        def generate(index: int) -> SetFunction:
            seed = context.instance_seed(index)
            if dominated:
                return random_submeasure_lower_p(config.n, config.p, seed)
            return random_supermeasure_upper_p(config.n, config.p, seed, list(SupermeasureFamily)[index % 2])

        def run(index: int, item: Tuple[str, Optional[SetFunction]]) -> ReportRecord:
            id, phi = item
            phi = generate(index) if phi is None else phi
            options: Dict[str, Any] = {"exact": config.exact, "tol": config.tol}
            if not dominated:
                options["enforce_continuity"] = config.continuity
            solution = extract_measure(phi, config.mode, **options)
            if not solution.optimal:
                raise NumericalError(f"{id}: LP finished with status {solution.status.value}")
            table = solution.measure.table()
            measured: Dict[str, Optional[float]] = {
                "objective": solution.objective,
                "total": phi.total,
                "residual": solution.residual,
                "iterations": float(solution.iterations),
                "continuity_violations": float(np.count_nonzero((phi.values <= 0) & (table > 0))),
            }
            params: Dict[str, Any] = {"n": phi.n, "mode": config.mode.value, "p": config.p}
            if config.p is None:
                return context.record(id, params, measured, "residual", 0.0)
            kp = kp_constant(config.p)
            measured["kp"] = kp
            sense = Sense.GE if dominated else Sense.LE
            return context.record(id, params, measured, "objective", kp * phi.total, sense)

        return context.run_instances(run, _instances(config, SetFunction.parse_obj))

    @command(
        "envelope",
        EnvelopeConfig,
        help="superadditive envelope ψ of φ^q and a measure with exactly φ's null sets",
    )
    def envelope(self, config: EnvelopeConfig, context: RunContext) -> List[ReportRecord]:
        def generate(index: int) -> SetFunction:
            if config.q > 1:
                return random_submeasure_lower_p(config.n, config.q, context.instance_seed(index))
            return power_of_measure(random_weights(config.n, context.rng(index)), 1.0)

        def run(index: int, item: Tuple[str, Optional[SetFunction]]) -> ReportRecord:
            id, phi = item
            phi = generate(index) if phi is None else phi
            psi = envelope_supermeasure(phi, config.q)
            mu = equivalent_measure(phi, config.q, config.c, config.tol)
            powered = phi.values**config.q
            gap = np.maximum(powered - psi.values, config.c**config.q * psi.values - powered)
            measured = {
                "psi_total": psi.total,
                "mu_total": mu.total,
                "psi_supermeasure": _flag(classify(psi, config.tol).supermeasure),
                "root_submeasure": _flag(classify(power(psi, 1.0 / config.q), config.tol).submeasure),
                "sandwich_gap": float(np.max(gap)),
                "equivalent": _flag(check_equivalence(phi, mu)),
            }
            return context.record(id, {"n": phi.n, "q": config.q, "c": config.c}, measured, "equivalent", 1.0, Sense.EQ)

        return context.run_instances(run, _instances(config, SetFunction.parse_obj))

    @command("kp", KpConfig, help="the sharp constant K_p = 2(2^p - 1)^{-1/p} - 1 of the extraction theorems")
    def kp(self, config: KpConfig, context: RunContext) -> List[ReportRecord]:
        kp = kp_constant(config.p)
        measured = {"kp": kp, "kp_p_2p": kp * config.p * 2.0**config.p}
        return [context.emit(context.record("kp", {"p": config.p}, measured))]

    @command(
        "lorentz",
        LorentzConfig,
        help="Lorentz quasi-norms of step functions: L_{p,q}, weak L_p and the partition norms Λ_{p,q}",
    )
    def lorentz(self, config: LorentzConfig, context: RunContext) -> List[ReportRecord]:
        p, q, form = config.p, config.q, config.form
        if form is LorentzForm.LAMBDA_INF:
            logger.warning("q < p: checking L_{p,q} <= Λ_{p,q} <= L_{p,q}/c, the ordering the maximality of Λ forces")

        def run(index: int, item: Tuple[str, Optional[StepFunction]]) -> ReportRecord:
            id, fstar = item
            fstar = random_step_function(context.instance_seed(index)) if fstar is None else fstar
            params: Dict[str, Any] = {"p": p, "q": q, "form": form.value, "steps": len(fstar)}
            if form is LorentzForm.INTEGRAL:
                norm = lpq_norm(fstar, (p, q))
                distribution = lpq_norm_distribution(fstar, (p, q))
                measured = {"norm": norm, "relative_gap": abs(norm - distribution) / max(1.0, norm)}
                return context.record(id, params, measured, "relative_gap", 0.0)
            if form is LorentzForm.WEAK:
                weak, strong = lp_weak_norm(fstar, p), lpq_norm(fstar, (p, p))
                measured = {"norm": weak, "lp_norm": strong, "ratio": weak / strong if strong > 0 else 0.0}
                return context.record(id, params, measured, "ratio", 1.0)
            norm = lambda_sup_norm(fstar, (p, q)) if form is LorentzForm.LAMBDA_SUP else lambda_inf_norm(fstar, (p, q))
            integral = lpq_norm(fstar, (p, q))
            lower, upper = comparison_constants((p, q))
            ratio = integral / norm if norm > 0 else lower
            measured = {
                "norm": norm,
                "integral": integral,
                "ratio": ratio,
                "lower": lower,
                "upper": upper,
                "margin": min(ratio - lower, upper - ratio),
            }
            return context.record(id, params, measured, "margin", 0.0, Sense.GE)

        return context.run_instances(run, _instances(config, StepFunction.parse_obj))

    @command(
        "renorm",
        RenormConfig,
        help="renorm X to Y with exact upper p- and lower q-estimates and X <= Y <= abX",
    )
    def renorm(self, config: RenormConfig, context: RunContext) -> List[ReportRecord]:
        def run(index: int, item: Tuple[str, Optional[QuasiNormSpec]]) -> ReportRecord:
            id, spec = item
            spec = random_norm(config.n, config.p, config.q, context.rng(index)) if spec is None else spec
            result = renorm_spec(
                spec, config.p, config.q, config.a, config.b, config.samples, context.instance_seed(index), config.tol
            )
            check = result.check
            measured = {
                "a": result.a,
                "b": result.b,
                "sandwich_violations": float(check.sandwich_violations),
                "upper_violations": float(check.upper_violations),
                "lower_violations": float(check.lower_violations),
                "max_sandwich_ratio": check.max_sandwich_ratio,
                "violations": float(check.sandwich_violations + check.upper_violations + check.lower_violations),
            }
            params = {"kind": spec.kind, "n": spec.n, "p": config.p, "q": config.q}
            return context.record(id, params, measured, "violations", 0.0, slack=0.0)

        return context.run_instances(run, _instances(config, parse_spec))

    @command(
        "lattice-measure",
        LatticeConfig,
        help="change of density into Λ_{p,q}(μ) (lower), Λ_{q,p}(λ) (upper) or weak L_p (embedding), sampled",
    )
    def lattice_measure(self, config: LatticeConfig, context: RunContext) -> List[ReportRecord]:
        def generate(index: int) -> QuasiNormSpec:
            rng = context.rng(index)
            if config.side is Side.EMBEDDING:
                s = float(rng.uniform(config.p, config.q))
                return WeightedLs(n=config.n, s=s, weights=rng.uniform(0.2, 2.0, size=config.n))
            return random_norm(config.n, config.p, config.q, rng)

        def run(index: int, item: Tuple[str, Optional[QuasiNormSpec]]) -> ReportRecord:
            id, spec = item
            spec = generate(index) if spec is None else spec
            f = np.ones(spec.n) if config.f is None else np.asarray(config.f, dtype=float)
            if f.shape != (spec.n,):
                raise PreconditionError(f"{id}: f has {f.size} entries, the space has {spec.n} atoms")
            f = f / spec(f)
            cert = lattice.lattice_measure(
                config.side,
                spec,
                config.p,
                config.q,
                f,
                a=config.a,
                b=config.b,
                samples=config.samples,
                seed=context.instance_seed(index),
            )
            measured = {
                "constant": cert.constant,
                "max_observed_ratio": cert.max_observed_ratio,
                "violations": float(cert.violations),
                "extracted_mass": cert.extracted_mass,
                "kp": cert.kp,
                "mass": cert.measure.total,
            }
            params = {"kind": spec.kind, "n": spec.n, "side": config.side.value, "p": config.p, "q": config.q}
            slack = config.tol * max(1.0, cert.constant)
            return context.record(id, params, measured, "max_observed_ratio", cert.constant, slack=slack)

        return context.run_instances(run, _instances(config, parse_spec))

    @command(
        "convexity",
        ConvexityConfig,
        help="search lower bounds of the convexity constants M^(r), M_(r) and M^(0), optionally against the θ bound",
    )
    def convexity(self, config: ConvexityConfig, context: RunContext) -> List[ReportRecord]:
        c_star = config.c_star or context.settings.c_star
        geometric = config.kind is ConvexityKind.GEOMETRIC

        def generate(index: int) -> QuasiNormSpec:
            rng = context.rng(index)
            weights = rng.uniform(0.2, 2.0, size=config.n)
            if config.theta is not None:
                return LorentzLambda(n=config.n, p=1.0, q=1.0 + config.theta, weights=weights)
            s = float(rng.uniform(1.0, 3.0)) if geometric else config.r
            return WeightedLs(n=config.n, s=s, weights=weights)

        def run(index: int, item: Tuple[str, Optional[QuasiNormSpec]]) -> ReportRecord:
            id, spec = item
            generated = spec is None
            spec = generate(index) if spec is None else spec
            # instances already run in parallel, one search shard each
            estimate = estimate_constant(config.kind, spec, config.r, config.budget, context.instance_seed(index), 1)
            measured = {
                "lower_bound": estimate.lower_bound,
                "witness_error": abs(estimate.reevaluate(spec) - estimate.lower_bound),
                "budget_used": float(estimate.budget_used),
            }
            params: Dict[str, Any] = {"kind": config.kind.value, "r": config.r, "n": spec.n, "spec": spec.kind}
            if config.theta is not None:
                bound = convexity_bound(0.0 if geometric else config.r, 1.0, config.theta, c_star)
                params.update(theta=config.theta, c_star=c_star)
                return context.record(id, params, measured, "lower_bound", bound)
            if generated:
                # weighted ℓ_r is exactly r-convex and r-concave, every ℓ_s geometrically convex
                return context.record(id, params, measured, "lower_bound", 1.0)
            return context.record(id, params, measured)

        return context.run_instances(run, _instances(config, parse_spec))

    @command(
        "sharpness",
        SharpnessConfig,
        help="the step function 1/t on [1-φ, 1] in Λ_{1,1+θ}: its norm, the analytic bound and the forced M^(r)",
    )
    def sharpness(self, config: SharpnessConfig, context: RunContext) -> List[ReportRecord]:
        records = sharpness_sweep(config.theta, config.grid, context.workers)

        def run(index: int, theta: float) -> ReportRecord:
            record = records[index]
            measured = record.dict(exclude={"theta", "grid", "resolved"})
            measured["resolved"] = _flag(record.resolved)
            bound = record.analytic_bound * (1.0 + 10.0 / config.grid)
            params = {"theta": theta, "grid": config.grid}
            return context.record(f"theta={theta}", params, measured, "lambda_norm_q", bound)

        return context.run_instances(run, config.theta)

    @command(
        "factorize",
        FactorizeConfig,
        help="factor T: ℓ_∞^n -> Y through L_{q,r}(μ): the measure μ and the constants C1..C4",
    )
    def factorize(self, config: FactorizeConfig, context: RunContext) -> List[ReportRecord]:
        def run(index: int, item: Tuple[str, Optional[OperatorSpec]]) -> ReportRecord:
            id, operator = item
            operator = random_operator(config.n, config.m, context.rng(index)) if operator is None else operator
            cert = factorization_measure(operator, config.p, config.samples, context.instance_seed(index))
            measured = {
                "C1": cert.C1,
                "C2": cert.C2,
                "C3": cert.C3,
                "C4": cert.C4,
                "B": cert.B,
                "kp": cert.kp,
                "comparison": cert.comparison,
                "max_ratio_iv": cert.max_ratio_iv,
            }
            params = {"n": operator.n, "m": operator.m, "p": cert.p, "q": cert.q, "r": cert.r, "mode": cert.mode.value}
            slack = config.tol * max(1.0, cert.C4)
            return context.record(id, params, measured, "max_ratio_iv", cert.C4, slack=slack)

        return context.run_instances(run, _instances(config, OperatorSpec.parse_obj))

    @command(
        "verify",
        VerifyConfig,
        help="sample the disjoint-sum, interpolation and Lorentz inequalities of a factorization certificate",
    )
    def verify(self, config: VerifyConfig, context: RunContext) -> List[ReportRecord]:
        def run(index: int, item: Tuple[str, Optional[OperatorSpec]]) -> ReportRecord:
            id, operator = item
            operator = random_operator(config.n, config.m, context.rng(index)) if operator is None else operator
            seed = context.instance_seed(index)
            cert = factorization_measure(operator, config.p, min(config.samples, 100), seed)
            report = verify_conditions(operator, cert, config.samples, seed, workers=1)
            measured = {
                "C2": cert.C2,
                "C3": cert.C3,
                "C4": cert.C4,
                "max_ratio_ii": report.max_ratio_ii,
                "max_ratio_iii": report.max_ratio_iii,
                "max_ratio_iv": report.max_ratio_iv,
                "violations": float(report.violations),
            }
            params = {"n": operator.n, "m": operator.m, "p": report.p, "mode": report.mode.value}
            return context.record(id, params, measured, "violations", 0.0, slack=0.0)

        return context.run_instances(run, _instances(config, OperatorSpec.parse_obj))

    @command("selftest", SelftestConfig, help="the acceptance suite: every construction against its bound")
    def selftest(self, config: SelftestConfig, context: RunContext) -> List[ReportRecord]:
        for record in run_selftest(config, context):
            context.emit(record)
        return context.records
