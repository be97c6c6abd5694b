# -*- coding: utf-8 -*-
"""
Builds the argparse command tree from the registered commands and their config models.

Values stay strings here; the config model does every conversion and range check, so argparse only decides
which flags exist.
"""
import argparse
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Type

from pydantic import BaseModel
from pydantic.fields import SHAPE_LIST, SHAPE_SINGLETON, ModelField

from setfn.configs import RunConfig

_base_types: Dict[type, str] = {
    bool: "flag",
    int: "INT",
    float: "REAL",
    str: "TEXT",
    Path: "PATH",
}


def _metavar(field: ModelField) -> str:
    for base, metavar in _base_types.items():
        if isinstance(field.type_, type) and issubclass(field.type_, base):
            return metavar
    raise NotImplementedError(f"Unsupported config field type {field.type_}")


def _is_flag(field: ModelField) -> bool:
    return field.shape == SHAPE_SINGLETON and field.type_ is bool


class ArgBuilder:
    def __init__(self, app):
        self.app = app

    def create(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog="setfn", description="Measures extracted from submeasures, Lorentz norms and their constants."
        )
        parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
        parser.add_argument("--log-file", default=None, type=Path, help="also append logs to this file")
        subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
        subparsers.required = True
        for service in self.app.services:
            for command in service.commands:
                sub = subparsers.add_parser(command.name, help=command.help, description=command.help)
                self.add_config_arguments(sub, command.config_model)
        return parser

    def add_config_arguments(self, parser: argparse.ArgumentParser, schema: Type[BaseModel]) -> None:
        for name, field in schema.__fields__.items():
            flag = "--" + name.replace("_", "-")
            help_text = field.field_info.description or ""
            if field.required:
                help_text += " (required)"
            elif field.default is not None and not _is_flag(field):
                default = field.default.value if isinstance(field.default, Enum) else field.default
                help_text += f" (default: {default})"
            options: Dict[str, Any] = {"dest": name, "help": help_text, "default": argparse.SUPPRESS}
            if _is_flag(field):
                options["action"] = "store_true"
            elif isinstance(field.type_, type) and issubclass(field.type_, Enum):
                options["choices"] = [member.value for member in field.type_]
            else:
                options["metavar"] = _metavar(field)
                if field.shape == SHAPE_LIST:
                    options["nargs"] = "+"
                elif field.shape != SHAPE_SINGLETON:
                    raise NotImplementedError(f"Unsupported config field shape for {name}")
            options["required"] = field.required
            parser.add_argument(flag, **options)


def config_values(namespace: argparse.Namespace, schema: Type[RunConfig]) -> Dict[str, Any]:
    return {name: getattr(namespace, name) for name in schema.__fields__ if hasattr(namespace, name)}
