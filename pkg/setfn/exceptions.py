# -*- coding: utf-8 -*-
from typing import Optional

from setfn.types import ExitCode, Subset


class SetFnError(Exception):
    code: ExitCode = ExitCode.PRECONDITION

    def __init__(self, detail: Optional[str] = None, code: Optional[ExitCode] = None) -> None:
        if code is not None:
            self.code = code
        if detail is None:
            detail = self.code.description
        self.detail = detail
        super().__init__(detail)

    def __repr__(self) -> str:
        class_name = self.__class__.__name__
        return f"{class_name}(code={self.code.value}, detail={self.detail!r})"


class InvalidInputError(SetFnError):
    code = ExitCode.INVALID_INPUT


class PreconditionError(SetFnError):
    code = ExitCode.PRECONDITION


class NotMonotoneError(PreconditionError):
    pass


class WrongRegimeError(PreconditionError):
    pass


class TooManyAtomsError(PreconditionError):
    pass


class RejectionBudgetError(SetFnError):
    code = ExitCode.PRECONDITION

    def __init__(self, family: str, attempts: int) -> None:
        self.family = family
        self.attempts = attempts
        super().__init__(f"family {family!r} exhausted its rejection budget of {attempts} attempts")


class ClassificationError(SetFnError):
    code = ExitCode.PRECONDITION


class SandwichViolation(SetFnError):
    code = ExitCode.PRECONDITION

    def __init__(self, subset: Subset, detail: str) -> None:
        self.subset = subset
        super().__init__(f"{detail} at subset {subset:#b}")


class BoundViolation(SetFnError):
    code = ExitCode.NUMERICAL


class NumericalError(SetFnError):
    code = ExitCode.NUMERICAL
