# -*- coding: utf-8 -*-
import logging
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import logzero
from logzero import logger
from pydantic import ValidationError

from setfn.argbuilder import ArgBuilder, config_values
from setfn.config import get_settings
from setfn.context import RunContext
from setfn.loaders import describe_validation_error
from setfn.middleware import Middleware
from setfn.middleware.base import BaseCommandMiddleware
from setfn.middleware.exception import handle_exception
from setfn.reports import emit_report
from setfn.service import Command, Service
from setfn.signals import run_shutdown, run_startup
from setfn.types import ExitCode


class SetFnLab(object):
    def __init__(self, middleware: Optional[Sequence[Middleware]] = None):
        self.services: List[Service] = []
        self.startup_funcs: List[Callable[..., Any]] = []
        self.shutdown_funcs: List[Callable[..., Any]] = []
        self.user_middleware: List[Middleware] = [] if middleware is None else list(middleware)

    def add_service(self, servicer) -> None:
        self.services.append(Service(servicer))

    def add_middleware(self, middleware_class: type, **options: Any) -> None:
        self.user_middleware.insert(0, Middleware(middleware_class, **options))

    def on_startup(self, func: Callable[..., None]):
        self.startup_funcs.append(func)
        return func

    def on_shutdown(self, func: Callable[..., None]):
        self.shutdown_funcs.append(func)
        return func

    @property
    def commands(self) -> Dict[str, Tuple[Service, Command]]:
        return {command.name: (service, command) for service in self.services for command in service.commands}

    def build_middleware_stack(self, app: Callable) -> Callable:
        middleware = [Middleware(BaseCommandMiddleware, handler=handle_exception)] + self.user_middleware
        for item in middleware:
            app = item.build(app)
        return app

    def setup(self):
        return ArgBuilder(self).create()

    @staticmethod
    def configure_logging(level: Optional[str], logfile: Optional[str]) -> None:
        name = (level or get_settings().log_level).upper()
        logzero.loglevel(getattr(logging, name, logging.INFO))
        if logfile:
            logzero.logfile(str(logfile), loglevel=getattr(logging, name, logging.INFO))

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        parser = self.setup()
        namespace = parser.parse_args(argv)
        self.configure_logging(namespace.log_level, namespace.log_file)
        service, command = self.commands[namespace.command]
        try:
            config = command.config_model.parse_obj(config_values(namespace, command.config_model))
        except ValidationError as exc:
            logger.error(f"setfn {command.name} [Err] -> invalid options: {describe_validation_error(exc)}")
            return int(ExitCode.INVALID_INPUT)
        settings = get_settings()
        context = RunContext(command, config, settings)

        for handler in self.startup_funcs:
            handler()
        run_startup.send(self)
        try:
            code = self.build_middleware_stack(service)(config, context)
            if code in (ExitCode.OK, ExitCode.FAILED):
                self.write(emit_report(context.records, config.format), config.output)
        finally:
            for handler in self.shutdown_funcs:
                handler()
            run_shutdown.send(self)
        return int(code)

    @staticmethod
    def write(payload: bytes, path=None) -> None:
        if path is None:
            sys.stdout.buffer.write(payload + b"\n")
            sys.stdout.flush()
        else:
            with open(path, "wb") as f:
                f.write(payload)
