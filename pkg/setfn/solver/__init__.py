# -*- coding: utf-8 -*-
import typing

from .base import BaseSolver, LinearProgram, RawSolution
from .simplex import SimplexSolver


class Solver:
    """
    Solver class plus options, instantiated per solve so that no state is shared between LPs
    """

    def __init__(self, cls: type, **options: typing.Any) -> None:
        self.cls = cls
        self.options = options

    def __repr__(self) -> str:
        class_name = self.__class__.__name__
        option_strings = [f"{key}={value!r}" for key, value in self.options.items()]
        args_repr = ", ".join([self.cls.__name__] + option_strings)
        return f"{class_name}({args_repr})"

    def build(self, **overrides: typing.Any) -> BaseSolver:
        return self.cls(**{**self.options, **overrides})


DEFAULT_SOLVER = Solver(SimplexSolver)

__all__ = ["BaseSolver", "LinearProgram", "RawSolution", "SimplexSolver", "Solver", "DEFAULT_SOLVER"]
