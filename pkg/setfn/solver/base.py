# -*- coding: utf-8 -*-
import time
from typing import Optional

import numpy as np
from logzero import logger
from pydantic import validator

from setfn.base import BaseSchema, frozen_array
from setfn.config import get_settings
from setfn.types import LpStatus


class LinearProgram(BaseSchema):
    """maximize c·x subject to A x <= b, x >= 0"""

    c: np.ndarray
    a: np.ndarray
    b: np.ndarray
    label: str = "lp"

    @validator("c", "b", pre=True)
    def _vector(cls, value):
        return frozen_array(value)

    @validator("a", pre=True)
    def _matrix(cls, value):
        return frozen_array(value, ndim=2)

    @validator("b")
    def _shapes(cls, b, values):
        a, c = values.get("a"), values.get("c")
        if a is not None and c is not None and a.shape != (len(b), len(c)):
            raise ValueError(f"constraint matrix has shape {a.shape}, expected {(len(b), len(c))}")
        return b

    @property
    def shape(self):
        return self.a.shape


class RawSolution(BaseSchema):
    status: LpStatus
    x: np.ndarray
    y: np.ndarray
    objective: float
    iterations: int = 0
    exact: bool = False

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


class BaseSolver:
    def __init__(self, tol: Optional[float] = None, iteration_cap: Optional[int] = None, exact: bool = False):
        settings = get_settings()
        self.exact = exact
        self.tol = 0.0 if exact else (settings.tol if tol is None else tol)
        self.iteration_cap = iteration_cap or settings.lp_iteration_cap

    def __call__(self, program: LinearProgram) -> RawSolution:
        start_time = time.time()
        solution = self.solve(program)
        elapsed_time = time.time() - start_time
        rows, cols = program.shape
        logger.debug(
            f"LP {program.label} {rows}x{cols} exact={self.exact} [{solution.status.value}] "
            f"{solution.iterations} pivots {elapsed_time:.3f} seconds"
        )
        return solution

    def solve(self, program: LinearProgram) -> RawSolution:
        raise NotImplementedError
