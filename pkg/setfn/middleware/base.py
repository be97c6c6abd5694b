# -*- coding: utf-8 -*-
import time
from typing import Callable, Optional

from logzero import logger

from setfn.configs import RunConfig
from setfn.context import RunContext
from setfn.reports import all_passed
from setfn.types import ExitCode


def _describe(config: RunConfig) -> str:
    return ", ".join(f"{name}={value}" for name, value in config.dict(exclude_defaults=True).items())


class BaseCommandMiddleware:
    """Times a command, logs its outcome and maps it to an exit code"""

    def __init__(self, app: Callable, handler: Optional[Callable] = None):
        self.app = app
        self.handler = handler

    def __call__(self, config: RunConfig, context: RunContext) -> ExitCode:
        try:
            start_time = time.time()
            records = self.app(config, context)
            elapsed_time = time.time() - start_time
            failed = sum(not record.passed for record in records)
            status = "OK" if not failed else f"{failed}/{len(records)} FAILED"
            logger.info(f"setfn {context.command.name}({_describe(config)}) [{status}] {elapsed_time:.3f} seconds")
            return ExitCode.OK if all_passed(records) else ExitCode.FAILED
        except Exception as exc:
            if self.handler:
                return self.handler(config, context, exc)
            logger.exception(f"setfn {context.command.name}({_describe(config)}) [Err] -> {repr(exc)}")
            return ExitCode.NUMERICAL
