# -*- coding: utf-8 -*-
import typing


class Middleware:
    """A command middleware class and the options it is built with; ``build`` wraps the next callable"""

    def __init__(self, cls: type, **options: typing.Any) -> None:
        self.cls = cls
        self.options = options

    def build(self, app: typing.Callable) -> typing.Callable:
        return self.cls(app=app, **self.options)

    def __repr__(self) -> str:
        options = "".join(f", {key}={value!r}" for key, value in self.options.items())
        return f"Middleware({self.cls.__name__}{options})"
