# -*- coding: utf-8 -*-
import json
from pathlib import Path
from typing import Any, Callable, List, Tuple, TypeVar

from pydantic import ValidationError

from setfn.exceptions import InvalidInputError

T = TypeVar("T")


def read_json(path: Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInputError(f"{path}: cannot read input ({exc.strerror})")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}")


def describe_validation_error(exc: ValidationError) -> str:
    return "; ".join(
        f"field {'.'.join(str(part) for part in error['loc'])}: {error['msg']}" for error in exc.errors()
    )


def load_instances(path: Path, parse: Callable[[Any], T]) -> List[Tuple[str, T]]:
    """
    A file holds one object or an array of objects; instance ids are ``<file stem>[<index>]``
    """
    data = read_json(path)
    items = data if isinstance(data, list) else [data]
    instances = []
    for index, item in enumerate(items):
        where = f"{path} item {index}"
        try:
            instances.append((f"{Path(path).stem}[{index}]", parse(item)))
        except ValidationError as exc:
            raise InvalidInputError(f"{where}: {describe_validation_error(exc)}")
        except InvalidInputError as exc:
            raise InvalidInputError(f"{where}: {exc.detail}")
    return instances
