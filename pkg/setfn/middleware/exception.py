# -*- coding: utf-8 -*-
from logzero import logger

from setfn.configs import RunConfig
from setfn.context import RunContext
from setfn.exceptions import SetFnError
from setfn.types import ExitCode


def handle_exception(config: RunConfig, context: RunContext, exc: Exception) -> ExitCode:
    """SetFnError carries its own exit code; anything else is a numerical failure with a traceback"""
    if isinstance(exc, SetFnError):
        logger.error(f"setfn {context.command.name} [Err] -> {repr(exc)}")
        return exc.code
    logger.exception(f"setfn {context.command.name} [Err] -> {repr(exc)}")
    return ExitCode.NUMERICAL
