# -*- coding: utf-8 -*-
"""
One ReportRecord per instance. Its pass flag is a pure function of ``measured[key]``, ``bound``, ``sense`` and
``slack``, so it can be recomputed from the record alone.
"""
import csv
import io
import json
import math
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from pydantic import root_validator

from setfn.base import BaseSchema
from setfn.exceptions import InvalidInputError
from setfn.types import OutputFormat, Sense
from setfn.utils import format_float


def compare(value: Optional[float], bound: Optional[float], sense: Sense, slack: float = 0.0) -> bool:
    if bound is None:
        return True
    if value is None or math.isnan(value):
        return False
    sense = Sense(sense)
    if sense is Sense.LE:
        return value <= bound + slack
    if sense is Sense.GE:
        return value >= bound - slack
    return abs(value - bound) <= slack


class ReportRecord(BaseSchema):
    id: str
    params: Dict[str, Any] = {}
    measured: Dict[str, Optional[float]] = {}
    key: Optional[str] = None
    bound: Optional[float] = None
    sense: Sense = Sense.LE
    slack: float = 0.0
    passed: bool = True
    ms: float = 0.0

    @root_validator(skip_on_failure=True)
    def _recompute(cls, values):
        key = values.get("key")
        if key is not None and key not in values["measured"]:
            raise ValueError(f"key {key!r} is not among the measured quantities")
        value = values["measured"].get(key) if key is not None else None
        values["passed"] = key is None or compare(value, values.get("bound"), values["sense"], values["slack"])
        return values

    def recompute_pass(self) -> bool:
        if self.key is None:
            return True
        return compare(self.measured.get(self.key), self.bound, self.sense, self.slack)


def _columns(records: Sequence[ReportRecord]) -> Tuple[List[str], List[str]]:
    params: Dict[str, None] = {}
    measured: Dict[str, None] = {}
    for record in records:
        params.update(dict.fromkeys(record.params))
        measured.update(dict.fromkeys(record.measured))
    return list(params), list(measured)


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, (list, tuple)):
        return json.dumps(value)
    return str(value)


def _csv(records: Sequence[ReportRecord]) -> str:
    params, measured = _columns(records)
    header = ["id"] + params + [name if name not in params else f"measured.{name}" for name in measured]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header + ["bound", "pass", "ms"])
    for record in records:
        row = [record.id]
        row += [_cell(record.params.get(name)) for name in params]
        row += [_cell(record.measured.get(name)) for name in measured]
        row += [_cell(record.bound), _cell(record.passed), _cell(record.ms)]
        writer.writerow(row)
    return buffer.getvalue()


def emit_report(records: Iterable[ReportRecord], fmt: OutputFormat = OutputFormat.JSON) -> bytes:
    """
    JSON: an array of records with stable field names; CSV: id, params…, measured…, bound, pass, ms
    """
    records = list(records)
    if OutputFormat(fmt) is OutputFormat.CSV:
        return _csv(records).encode("utf-8")
    return ("[" + ",".join(record.json() for record in records) + "]").encode("utf-8")


def parse_report(data: bytes) -> List[ReportRecord]:
    try:
        items = json.loads(data)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"report is not JSON: line {exc.lineno} column {exc.colno}: {exc.msg}")
    if not isinstance(items, list):
        raise InvalidInputError("a JSON report is an array of records")
    return [ReportRecord.parse_obj(item) for item in items]


def all_passed(records: Iterable[ReportRecord]) -> bool:
    return all(record.passed for record in records)
