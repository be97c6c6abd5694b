# -*- coding: utf-8 -*-
import functools
import inspect
from typing import Any, Callable, Dict, List, Type

from setfn.configs import RunConfig
from setfn.reports import ReportRecord
from setfn.utils import snake_to_kebab


def is_entrypoint(command):
    return hasattr(command, "servicer")


class Service:
    def __init__(self, servicer: Type):
        self.service_name = servicer.__name__
        self.servicer_class = servicer
        self.servicer = servicer()

    @property
    def commands(self) -> List["Command"]:
        return [attr for _, attr in inspect.getmembers(self.servicer_class) if is_entrypoint(attr)]

    @property
    def command_map(self) -> Dict[str, "Command"]:
        return {command.name: command for command in self.commands}

    def __call__(self, config: RunConfig, context) -> List[ReportRecord]:
        return context.command(self.servicer, config, context)


class Command:
    def __init__(self, name: str, endpoint: Callable[..., Any], *, config_model: Type[RunConfig], help: str = ""):
        self.name = name
        self.endpoint = endpoint
        self.config_model = config_model
        self.help = help or inspect.getdoc(endpoint) or ""
        self._servicer = None

    @property
    def servicer(self):
        return self._servicer

    def __get__(self, instance, cls):
        if self.servicer is None:
            self._servicer = cls
        if instance is None:
            return self
        return functools.partial(self, instance)

    def __set__(self, instance, value):
        raise ValueError("Not allowed to modify a command.")

    def __call__(self, instance, config: RunConfig, context) -> List[ReportRecord]:
        parameters = inspect.signature(self.endpoint).parameters
        if len(parameters) != 3:
            raise ValueError(f"command {self.name} needs (self, config, context) parameters")
        return list(self.endpoint(instance, config, context) or [])


def command(name: str, config_model: Type[RunConfig], help: str = ""):
    def decorator(endpoint):
        return Command(name=snake_to_kebab(name), endpoint=endpoint, config_model=config_model, help=help)

    return decorator
