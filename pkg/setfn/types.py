# -*- coding: utf-8 -*-
from enum import Enum
from enum import IntEnum as _IntEnum
from typing import TYPE_CHECKING

from pydantic import ConstrainedFloat, ConstrainedInt

Subset = int

if TYPE_CHECKING:
    AtomCount = int
    Exponent = float
    Tolerance = float
    Seed = int
else:

    class AtomCount(ConstrainedInt):
        ge = 1
        le = 16

    class Exponent(ConstrainedFloat):
        gt = 0

    class Tolerance(ConstrainedFloat):
        ge = 0
        lt = 1

    class Seed(ConstrainedInt):
        ge = 0
        lt = 2**63


class IntEnum(_IntEnum):
    """
    IntEnum whose members carry a description
    Example:
        class ExitCode(IntEnum):
            OK = 0, "every record passed"
            FAILED = 1, "at least one record failed"

        print(ExitCode.FAILED.value, ExitCode.FAILED.description)
    """

    description: str

    def __new__(cls, value: int, description: str = ""):
        obj = int.__new__(cls, value)  # noqa
        obj._value_ = value
        obj.description = description
        return obj


class ChoiceEnum(str, Enum):
    """
    String enum whose members carry a description, rendered into CLI help
    Example:
        class Side(ChoiceEnum):
            LOWER = "lower", "dominated measure"
    """

    description: str

    def __new__(cls, value: str, description: str = ""):
        obj = str.__new__(cls, value)
        obj._value_ = value
        obj.description = description
        return obj

    def __str__(self) -> str:
        return self.value

    @classmethod
    def help_text(cls) -> str:
        return "; ".join(f"{member.value}: {member.description}" if member.description else member.value for member in cls)


class ExitCode(IntEnum):
    OK = 0, "every record passed"
    FAILED = 1, "at least one record failed its check"
    INVALID_INPUT = 2, "malformed input file or field"
    PRECONDITION = 3, "an operation contract was violated"
    NUMERICAL = 4, "numerical failure or a theorem bound was contradicted"


class Mode(ChoiceEnum):
    MAX = "max", "maximize over partitions"
    MIN = "min", "minimize over partitions"


class LpStatus(ChoiceEnum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    NUMERICAL_FAILURE = "numerical-failure"


class ExtractMode(ChoiceEnum):
    DOMINATED = "dominated", "largest measure 0 <= λ <= φ"
    DOMINATING = "dominating", "smallest measure λ >= φ"


class SubmeasureFamily(ChoiceEnum):
    POWER = "power", "ν^β with β uniform in [1/p, 1]"
    FLOOR = "floor", "max(ν^β, c·1_{A≠∅}) with rejection"
    PERTURB = "perturb", "noisy ν^β repaired to a monotone submeasure, with rejection"


class SupermeasureFamily(ChoiceEnum):
    POWER = "power", "ν^β with β uniform in [1, 1/p]"
    MIXTURE = "mixture", "average of two convex powers with rejection"
    PERTURB = "perturb", "noisy ν^β repaired to a monotone supermeasure, with rejection"


class LorentzForm(ChoiceEnum):
    INTEGRAL = "integral", "L_{p,q} rearrangement integral"
    WEAK = "weak", "L_{p,∞} weak-type supremum"
    LAMBDA_SUP = "lambda-sup", "Λ_{p,q} supremum over partitions, p < q"
    LAMBDA_INF = "lambda-inf", "Λ_{p,q} infimum over partitions, q < p"


class Side(ChoiceEnum):
    LOWER = "lower", "dominated measure of ‖χ_A‖^p: ‖g/f‖_Λ(μ) <= ab K^{-1/p} ‖g‖_X"
    UPPER = "upper", "dominating measure of ‖χ_A‖^q: ‖g‖_X <= ab K^{1/q} ‖g/f‖_Λ(λ)"
    EMBEDDING = "embedding", "weak-type embedding: ‖g/f‖_{L_{p,∞}(μ)} <= ‖g‖_X"


class ConvexityKind(ChoiceEnum):
    CONVEXITY = "convexity", "p-convexity constant M^(p)"
    CONCAVITY = "concavity", "p-concavity constant M_(p)"
    GEOMETRIC = "geometric", "geometric convexity constant M^(0)"


class CertificateMode(ChoiceEnum):
    EXACT = "exact", "Banach codomain, box maxima at sign vertices"
    HEURISTIC = "heuristic", "quasi-Banach codomain, search lower bound only"


class OutputFormat(ChoiceEnum):
    JSON = "json"
    CSV = "csv"


class Sense(ChoiceEnum):
    LE = "le", "measured <= bound + slack"
    GE = "ge", "measured >= bound - slack"
    EQ = "eq", "|measured - bound| <= slack"
