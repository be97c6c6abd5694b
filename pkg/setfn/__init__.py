# -*- coding: utf-8 -*-
from .app import SetFnLab
from .base import BaseSchema
from .context import RunContext
from .factorization import FactorizationCertificate, OperatorSpec, ZNorm, factorization_measure, verify_conditions
from .lorentz import StepFunction, lorentz_norm, lpq_norm
from .measures import AtomicMeasure, LpSolution, max_dominated_measure, min_dominating_measure
from .quasinorm import QuasiNormSpec, parse_spec, renorm
from .service import command
from .setfunctions import SetFunction, classify, estimate_exponents, kp_constant
