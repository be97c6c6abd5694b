# -*- coding: utf-8 -*-
"""
The acceptance suite behind ``setfn selftest``.

Each criterion runs a batch of seeded instances and folds it into one record per cell (worst value against the
bound), so the run exits 0 only when every construction met its bound on every instance.
"""
import math
from typing import Any, Callable, List, Optional, Sequence, Tuple

import numpy as np
from logzero import logger

from setfn.configs import SelftestConfig
from setfn.context import RunContext
from setfn.convexity import convexity_bound, estimate_constant, sharpness_sweep
from setfn.exceptions import RejectionBudgetError
from setfn.factorization import (
    OperatorSpec,
    disjointness_constant_C1,
    factorization_measure,
    verify_conditions,
    z_norm,
    z_norm_partitions,
)
from setfn.generators import (
    power_of_measure,
    random_norm,
    random_operator,
    random_submeasure_lower_p,
    random_supermeasure_upper_p,
    random_weights,
)
from setfn.lattice import lattice_measure, nondegeneracy_measure, norm_setfunction
from setfn.lorentz import (
    StepFunction,
    comparison_constants,
    lambda_inf_norm,
    lambda_inf_norm_partition,
    lambda_sup_norm,
    lambda_sup_norm_partition,
    lorentz_norm,
    lpq_norm,
    random_step_function,
    rearrange,
)
from setfn.measures import (
    AtomicMeasure,
    check_equivalence,
    envelope_supermeasure,
    equivalent_measure,
    max_dominated_measure,
    min_dominating_measure,
)
from setfn.quasinorm import LorentzLambda, WeightedLs, renorm
from setfn.reports import ReportRecord
from setfn.setfunctions import SetFunction, classify, kp_constant, power, satisfies_lower_estimate
from setfn.types import ConvexityKind, Sense, Side, SubmeasureFamily, SupermeasureFamily
from setfn.utils import make_rng, run_ordered

SIZES = (3, 4, 5, 6, 7, 8)
DOMINATED_EXPONENTS = (1.25, 1.5, 2.0, 3.0)
DOMINATING_EXPONENTS = (0.4, 0.6, 0.8)
SUP_PAIRS = ((1.0, 2.0), (0.5, 1.5), (2.0, 3.0))
INF_PAIRS = ((2.0, 1.0), (1.5, 0.5), (3.0, 2.0))
SHARPNESS_THETAS = (0.2, 0.1, 0.05)
LIMIT_THETAS = (1e-3, 1e-30)
SHARPNESS_GRID = 10_000
LP_TOL = 1e-9
IDENTITY_TOL = 1e-10
REJECTION_BUDGET = 500
SUBMEASURE_FAMILIES = tuple(SubmeasureFamily)
SUPERMEASURE_FAMILIES = tuple(SupermeasureFamily)
ENVELOPE_CONSTANTS = (1.0, 0.5)
THETA_SEARCH_BUDGET = 200
THETA_KINDS = ((ConvexityKind.GEOMETRIC, 0.0), (ConvexityKind.CONVEXITY, 0.5))
TWO_STEP = StepFunction(steps=[(2.0, 1.0), (1.0, 1.0)])

Criterion = Callable[[SelftestConfig, RunContext], List[ReportRecord]]


def _batch(context: RunContext, func: Callable[[int], Any], trials: int) -> List[Any]:
    return run_ordered(func, list(range(trials)), context.workers)


def _null_atom_power(n: int, beta: float, rng: np.random.Generator) -> SetFunction:
    """Normalized ν^β where ν has one null atom"""
    weights = random_weights(n, rng)
    weights[int(rng.integers(n))] = 0.0
    return power_of_measure(weights / weights.sum(), beta)


def dominated_bound(config: SelftestConfig, context: RunContext) -> List[ReportRecord]:
    trials = min(config.trials, 500)
    records = []
    for n in SIZES:
        for p in DOMINATED_EXPONENTS:

            def solve(index: int) -> Tuple[float, bool, bool]:
                seed = context.instance_seed(index, "dominated", n, p)
                family = SUBMEASURE_FAMILIES[index % len(SUBMEASURE_FAMILIES)]
                try:
                    phi, rejected = random_submeasure_lower_p(n, p, seed, family, REJECTION_BUDGET), False
                except RejectionBudgetError:
                    phi, rejected = random_submeasure_lower_p(n, p, seed), True
                return max_dominated_measure(phi).objective, satisfies_lower_estimate(phi, p), rejected

            results = _batch(context, solve, trials)
            kp = kp_constant(p)
            measured = {
                "min_objective": float(np.min([objective for objective, _, _ in results])),
                "kp": kp,
                "unverified": float(sum(not verified for _, verified, _ in results)),
                "rejected": float(sum(rejected for _, _, rejected in results)),
            }
            params = {"n": n, "p": p, "trials": trials}
            records.append(
                context.record(f"dominated-bound[n={n},p={p}]", params, measured, "min_objective", kp, Sense.GE, LP_TOL)
            )
    return records


def dominating_bound(config: SelftestConfig, context: RunContext) -> List[ReportRecord]:
    trials = min(config.trials, 500)
    records = []
    for n in SIZES:
        for p in DOMINATING_EXPONENTS:

            def solve(index: int) -> Tuple[float, int, bool]:
                seed = context.instance_seed(index, "dominating", n, p)
                rejected = False
                if index % 4 == 3:
                    rng = make_rng(seed, "null-atom")
                    phi = _null_atom_power(n, float(rng.uniform(1.0, 1.0 / p)), rng)
                else:
                    family = SUPERMEASURE_FAMILIES[index % 4]
                    try:
                        phi = random_supermeasure_upper_p(n, p, seed, family, REJECTION_BUDGET)
                    except RejectionBudgetError:
                        phi, rejected = random_supermeasure_upper_p(n, p, seed), True
                solution = min_dominating_measure(phi, enforce_continuity=True)
                leaks = int(np.count_nonzero((phi.values == 0) & (solution.measure.table() != 0)))
                return solution.objective, leaks, rejected

            results = _batch(context, solve, trials)
            kp = kp_constant(p)
            params = {"n": n, "p": p, "trials": trials}
            measured = {
                "max_objective": float(np.max([objective for objective, _, _ in results])),
                "kp": kp,
                "rejected": float(sum(rejected for _, _, rejected in results)),
            }
            records.append(
                context.record(f"dominating-bound[n={n},p={p}]", params, measured, "max_objective", kp, slack=LP_TOL)
            )
            leaks = {"continuity_violations": float(sum(leak for _, leak, _ in results))}
            records.append(
                context.record(f"continuity[n={n},p={p}]", params, leaks, "continuity_violations", 0.0, slack=0.0)
            )
    return records


def additive_fixed_points(config: SelftestConfig, context: RunContext) -> List[ReportRecord]:
    trials = min(config.trials, 100)

    def solve(index: int) -> float:
        rng = context.rng(index, "additive")
        weights = rng.uniform(0.1, 1.0, size=SIZES[index % len(SIZES)])
        phi = power_of_measure(weights, 1.0)
        errors = []
        for solution in (max_dominated_measure(phi), min_dominating_measure(phi)):
            errors.append(abs(solution.objective - phi.total))
            errors.append(float(np.max(np.abs(solution.measure.weights - weights))))
        return max(errors)

    measured = {"max_error": max(_batch(context, solve, trials))}
    return [context.record("additive-fixed-points", {"trials": trials}, measured, "max_error", 0.0, slack=IDENTITY_TOL)]


def _crude(phi: SetFunction, c: float, rng: np.random.Generator) -> SetFunction:
    """
    φ·(c + (1-c)ν) for a random probability ν: monotone, between cφ and φ, so an exact lower q-estimate of φ becomes
    a lower q-estimate with constant c, and the null sets are those of φ
    """
    density = c + (1.0 - c) * power_of_measure(random_weights(phi.n, rng), 1.0).values
    return SetFunction(n=phi.n, values=phi.values * density)


def envelope_sandwich(config: SelftestConfig, context: RunContext) -> List[ReportRecord]:
    trials = min(config.trials, 200)
    records = []
    for c in ENVELOPE_CONSTANTS:

        def check(index: int) -> int:
            seed = context.instance_seed(index, "envelope", c)
            rng = make_rng(seed, "instance")
            n, q = 3 + index % 4, (1.5, 2.0)[(index // 2) % 2]
            if index % 2:
                phi = _null_atom_power(n, float(rng.uniform(1.0 / q, 1.0)), rng)
            else:
                phi = random_submeasure_lower_p(n, q, seed)
            if c < 1:
                phi = _crude(phi, c, rng)
            psi = envelope_supermeasure(phi, q)
            powered = phi.values**q
            scale = LP_TOL * max(1.0, float(psi.values.max()))
            failures = [
                not classify(psi).supermeasure,
                bool(np.any(powered > psi.values + scale)),
                bool(np.any(c**q * psi.values > powered + scale)),
                not check_equivalence(phi, equivalent_measure(phi, q, c)),
            ]
            if c == 1:
                # ψ^{1/q} inherits subadditivity only from a submeasure
                failures.append(not classify(power(psi, 1.0 / q)).submeasure)
            return sum(failures)

        measured = {"failures": float(sum(_batch(context, check, trials)))}
        params = {"trials": trials, "c": c}
        records.append(context.record(f"envelope-sandwich[c={c}]", params, measured, "failures", 0.0, slack=0.0))
    return records


def lorentz_partition_dp(config: SelftestConfig, context: RunContext) -> List[ReportRecord]:
    trials = min(config.trials, 200)
    pairs = SUP_PAIRS + INF_PAIRS

    def gap(index: int) -> float:
        rng = context.rng(index, "partition")
        n = 1 + index % 5
        mu = AtomicMeasure(n=n, weights=rng.uniform(0.1, 2.0, size=n))
        f = rng.exponential(size=n) * (rng.random(n) > 0.2)
        if not f.any():
            f[0] = 1.0
        p, q = pairs[index % len(pairs)]
        if p < q:
            dp, brute = lambda_sup_norm(rearrange(f, mu), (p, q)), lambda_sup_norm_partition(f, mu, (p, q))
        else:
            dp = lambda_inf_norm(rearrange(f, mu, pad_zero=True), (p, q))
            brute = lambda_inf_norm_partition(f, mu, (p, q))
        return abs(dp - brute) / max(1.0, brute)

    worst = max(_batch(context, gap, trials))
    lam, integral = lambda_sup_norm(TWO_STEP, (1.0, 2.0)), lpq_norm(TWO_STEP, (1.0, 2.0))
    regression = {"lambda": lam, "integral": integral, "error": max(abs(lam - 5**0.5), abs(integral - 7**0.5))}
    return [
        context.record("lorentz-partition-dp", {"trials": trials}, {"max_gap": worst}, "max_gap", 0.0, slack=LP_TOL),
        context.record("lorentz-two-step[p=1,q=2]", {"p": 1.0, "q": 2.0}, regression, "error", 0.0, slack=LP_TOL),
    ]


def lorentz_comparison(config: SelftestConfig, context: RunContext) -> List[ReportRecord]:
    trials = min(5 * config.trials, 1000)
    records = []
    for regime, pairs in (("p<q", SUP_PAIRS), ("q<p", INF_PAIRS)):

        def violates(index: int) -> bool:
            fstar = random_step_function(context.instance_seed(index, "comparison", regime))
            p, q = pairs[index % len(pairs)]
            lam, integral = lorentz_norm(fstar, (p, q)), lpq_norm(fstar, (p, q))
            lower, upper = comparison_constants((p, q))
            slack = LP_TOL * max(1.0, lam)
            return integral < lower * lam - slack or integral > upper * lam + slack

        measured = {"violations": float(sum(_batch(context, violates, trials)))}
        records.append(
            context.record(f"lorentz-comparison[{regime}]", {"trials": trials}, measured, "violations", 0.0, slack=0.0)
        )
    lam, integral = lambda_inf_norm(TWO_STEP, (2.0, 1.0)), lpq_norm(TWO_STEP, (2.0, 1.0))
    regression = {
        "lambda": lam,
        "integral": integral,
        "error": max(abs(integral - (1.0 + 2**0.5)), abs(lam - 2.0 * 2**0.5)),
    }
    records.append(
        context.record("lorentz-two-step[p=2,q=1]", {"p": 2.0, "q": 1.0}, regression, "error", 0.0, slack=LP_TOL)
    )
    return records


def renorm_estimates(config: SelftestConfig, context: RunContext) -> List[ReportRecord]:
    trials = min(config.trials, 50)

    def violations(index: int) -> int:
        seed = context.instance_seed(index, "renorm")
        spec = random_norm(4, 1.0, 2.0, make_rng(seed, "spec"))
        check = renorm(spec, 1.0, 2.0, samples=100, seed=seed).check
        return check.sandwich_violations + check.upper_violations + check.lower_violations

    measured = {"violations": float(sum(_batch(context, violations, trials)))}
    params = {"trials": trials, "p": 1.0, "q": 2.0}
    return [context.record("renorm-estimates", params, measured, "violations", 0.0, slack=0.0)]


def lattice_certificates(config: SelftestConfig, context: RunContext) -> List[ReportRecord]:
    trials = min(config.trials, 50)
    records = []
    for side in (Side.EMBEDDING, Side.LOWER, Side.UPPER):

        def excess(index: int) -> Tuple[float, int]:
            seed = context.instance_seed(index, "lattice", side.value)
            rng = make_rng(seed, "spec")
            if side is Side.EMBEDDING:
                spec = WeightedLs(n=3, s=float(rng.uniform(1.0, 2.0)), weights=rng.uniform(0.2, 2.0, size=3))
            else:
                spec = random_norm(3, 1.0, 2.0, rng)
            f = np.ones(spec.n) / spec(np.ones(spec.n))
            cert = lattice_measure(side, spec, 1.0, 2.0, f, samples=100, seed=seed)
            return cert.max_observed_ratio / cert.constant, cert.violations

        results = _batch(context, excess, trials)
        measured = {
            "max_ratio_to_constant": float(max(ratio for ratio, _ in results)),
            "violations": float(sum(count for _, count in results)),
        }
        params = {"trials": trials, "p": 1.0, "q": 2.0}
        key = "max_ratio_to_constant"
        records.append(context.record(f"lattice-certificate[{side.value}]", params, measured, key, 1.0, slack=LP_TOL))
    return records


def nondegeneracy(config: SelftestConfig, context: RunContext) -> List[ReportRecord]:
    trials = min(config.trials, 50)

    def failures(index: int) -> int:
        seed = context.instance_seed(index, "nondegeneracy")
        rng = make_rng(seed, "spec")
        n = 3 + index % 3
        if index % 2:
            weights = rng.uniform(0.2, 2.0, size=n)
            weights[int(rng.integers(n))] = 0.0
            spec = WeightedLs(n=n, s=float(rng.uniform(1.0, 2.0)), weights=weights)
        else:
            spec = random_norm(n, 1.0, 2.0, rng)
        phi = norm_setfunction(spec, np.ones(n), 1.0)
        _, b = spec.crude_constants(1.0, 2.0)
        measures = (nondegeneracy_measure(spec, 1.0), nondegeneracy_measure(spec, 1.0, 2.0, b))
        return sum(not check_equivalence(phi, mu) for mu in measures)

    measured = {"failures": float(sum(_batch(context, failures, trials)))}
    params = {"trials": trials, "p": 1.0, "q": 2.0}
    return [context.record("nondegeneracy-null-sets", params, measured, "failures", 0.0, slack=0.0)]


def convexity_theta_bound(config: SelftestConfig, context: RunContext) -> List[ReportRecord]:
    trials = min(config.trials, 20)
    c_star = context.settings.c_star
    records = []
    for theta in SHARPNESS_THETAS:
        bound = convexity_bound(0.0, 1.0, theta, c_star)

        def search(index: int) -> float:
            seed = context.instance_seed(index, "theta", theta)
            weights = make_rng(seed, "weights").uniform(0.2, 2.0, size=4)
            spec = LorentzLambda(n=4, p=1.0, q=1.0 + theta, weights=weights)
            kind, r = THETA_KINDS[index % len(THETA_KINDS)]
            return estimate_constant(kind, spec, r, THETA_SEARCH_BUDGET, seed, 1).lower_bound

        measured = {"max_lower_bound": float(max(_batch(context, search, trials))), "bound": bound}
        params = {"theta": theta, "c_star": c_star, "trials": trials}
        key = "max_lower_bound"
        records.append(context.record(f"convexity-theta-bound[{theta}]", params, measured, key, bound, slack=LP_TOL))
    return records


def _kappa_direct(theta: float, q: float, phi: float, psi_minus_one: float, beta: float) -> float:
    return math.exp(beta) * phi * psi_minus_one ** (-theta / q) * (-math.log1p(-phi)) ** (-1.0 / q)


def sharpness(config: SelftestConfig, context: RunContext) -> List[ReportRecord]:
    thetas = list(SHARPNESS_THETAS + LIMIT_THETAS)
    sweep = sharpness_sweep(thetas, SHARPNESS_GRID, context.workers)
    records = []
    for record in sweep:
        params = {"theta": record.theta, "grid": record.grid}
        direct = _kappa_direct(record.theta, record.q, record.phi, record.psi_minus_one, record.beta)
        kappa = {"kappa_lower": record.kappa_lower, "relative_error": abs(record.kappa_lower / direct - 1.0)}
        records.append(
            context.record(f"sharpness-kappa[{record.theta}]", params, kappa, "relative_error", 0.0, slack=IDENTITY_TOL)
        )
        if record.theta in SHARPNESS_THETAS:
            measured = {"lambda_norm_q": record.lambda_norm_q, "analytic_bound": record.analytic_bound}
            bound = record.analytic_bound * (1.0 + 1e-3)
            records.append(
                context.record(f"sharpness-norm[{record.theta}]", params, measured, "lambda_norm_q", bound, slack=0.0)
            )
    ratios = [record.exponent_ratio for record in sweep]
    limit = {
        "min_increment": float(np.min(np.diff(ratios))),
        "log_ratio_at_1e-3": sweep[len(SHARPNESS_THETAS)].log_ratio,
        "exponent_ratio_at_1e-30": ratios[-1],
    }
    records.append(
        context.record("sharpness-exponent-increasing", {"thetas": thetas}, limit, "min_increment", 0.0, Sense.GE, 0.0)
    )
    key = "exponent_ratio_at_1e-30"
    records.append(
        context.record("sharpness-exponent-limit", {"theta": LIMIT_THETAS[-1]}, limit, key, 0.8, Sense.GE, 0.0)
    )
    return records


def factorization(config: SelftestConfig, context: RunContext) -> List[ReportRecord]:
    trials = min(config.trials, 30)

    def check(index: int) -> Tuple[int, int, float]:
        seed = context.instance_seed(index, "factorization")
        rng = make_rng(seed, "operator")
        n, m = SIZES[index % len(SIZES)], 2 + index % 5
        operator = random_operator(n, m, rng)
        cert = factorization_measure(operator, samples=100, seed=seed)
        report = verify_conditions(operator, cert, 1000, seed, workers=1)
        k = min(n, 5)
        sub = OperatorSpec(matrix=operator.matrix[:, :k], codomain=operator.codomain, r=1.0, q=2.0)
        f = rng.standard_normal(k)
        brute = z_norm_partitions(sub, np.ones(k))
        gap = max(
            abs(disjointness_constant_C1(sub) - brute) / max(1.0, brute),
            abs(z_norm(sub, f) - z_norm_partitions(sub, f)) / max(1.0, brute),
        )
        return report.violations_iv, report.violations_ii + report.violations_iii, gap

    results = _batch(context, check, trials)
    params = {"trials": trials, "q": 2.0, "r": 1.0}
    conditions = {
        "violations_iv": float(sum(iv for iv, _, _ in results)),
        "violations_ii_iii": float(sum(other for _, other, _ in results)),
    }
    brute = {"max_gap": float(max(gap for _, _, gap in results))}
    return [
        context.record("factorization-lorentz-bound", params, conditions, "violations_iv", 0.0, slack=0.0),
        context.record("z-norm-brute-force", params, brute, "max_gap", 0.0, slack=LP_TOL),
    ]


def kp_asymptotics(config: SelftestConfig, context: RunContext) -> List[ReportRecord]:
    steps = [10.0**-k for k in range(2, 6)]
    errors = [abs(kp_constant(1.0 + e) - (1.0 - 4.0 * e * math.log(2.0))) / e for e in steps]
    near_one = {
        "normalized_error": errors[-1],
        "max_contraction": max(right / left for left, right in zip(errors, errors[1:])),
    }
    large = {"deviation": abs(kp_constant(15.0) * 15.0 * 2.0**15 - 1.0)}
    return [
        context.record("kp-one", {"p": 1.0}, {"kp": kp_constant(1.0)}, "kp", 1.0, Sense.EQ, 0.0),
        context.record("kp-large", {"p": 15.0}, large, "deviation", 0.05, slack=0.0),
        context.record("kp-near-one", {"steps": steps}, near_one, "normalized_error", 1e-3, slack=0.0),
        context.record("kp-near-one-rate", {"steps": steps}, near_one, "max_contraction", 0.2, slack=0.0),
    ]


CRITERIA: Sequence[Tuple[str, Criterion]] = (
    ("dominated measures reach K_p", dominated_bound),
    ("dominating measures stay below K_p", dominating_bound),
    ("measures are fixed points", additive_fixed_points),
    ("envelope sandwich and null sets", envelope_sandwich),
    ("Λ breakpoint DP against partitions", lorentz_partition_dp),
    ("Λ against L comparison", lorentz_comparison),
    ("renorm estimates", renorm_estimates),
    ("lattice certificates", lattice_certificates),
    ("nondegeneracy null sets", nondegeneracy),
    ("convexity under the θ bound", convexity_theta_bound),
    ("sharpness example", sharpness),
    ("factorization certificates", factorization),
    ("K_p asymptotics", kp_asymptotics),
)


def run_selftest(
    config: SelftestConfig, context: RunContext, criteria: Optional[Sequence[Tuple[str, Criterion]]] = None
) -> List[ReportRecord]:
    records: List[ReportRecord] = []
    for name, criterion in CRITERIA if criteria is None else criteria:
        batch = criterion(config, context)
        failed = [record.id for record in batch if not record.passed]
        if failed:
            logger.warning(f"selftest {name}: {len(failed)}/{len(batch)} failed: {', '.join(failed)}")
        else:
            logger.info(f"selftest {name}: {len(batch)} passed")
        records.extend(batch)
    return records
