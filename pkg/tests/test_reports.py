# -*- coding: utf-8 -*-
import json
import math

import pytest
from pydantic import ValidationError

from setfn.exceptions import InvalidInputError
from setfn.reports import ReportRecord, all_passed, compare, emit_report, parse_report
from setfn.types import OutputFormat, Sense


def test_compare_senses():
    assert compare(1.0, 1.0, Sense.LE)
    assert not compare(1.1, 1.0, Sense.LE)
    assert compare(1.1, 1.0, Sense.LE, slack=0.2)
    assert compare(2.0, 1.0, Sense.GE)
    assert not compare(0.5, 1.0, Sense.GE, slack=0.1)
    assert compare(1.0 + 1e-12, 1.0, Sense.EQ, slack=1e-10)
    assert not compare(math.nan, 1.0, Sense.LE)
    assert not compare(None, 1.0, Sense.GE)
    assert compare(None, None, Sense.LE)


def test_pass_flag_is_recomputed():
    record = ReportRecord(id="a", measured={"x": 2.0}, key="x", bound=1.0, passed=True)
    assert not record.passed
    assert record.recompute_pass() is False
    informational = ReportRecord(id="b", measured={"x": 2.0})
    assert informational.passed
    with pytest.raises(ValidationError):
        ReportRecord(id="c", measured={"x": 1.0}, key="y", bound=1.0)


def test_empty_reports():
    assert emit_report([]) == b"[]"
    assert emit_report([], OutputFormat.CSV) == b"id,bound,pass,ms\n"


def test_csv_layout():
    records = [
        ReportRecord(id="first", params={"n": 3}, measured={"mass": 0.5}, key="mass", bound=1.0),
        ReportRecord(id="second", params={"p": 2.0}, measured={"n": 1.0, "mass": 2.0}, key="mass", bound=1.0),
    ]
    lines = emit_report(records, OutputFormat.CSV).decode().splitlines()
    assert lines[0] == "id,n,p,mass,measured.n,bound,pass,ms"
    assert lines[1] == "first,3,,0.5,,1,true,0"
    assert lines[2] == "second,,2,2,1,1,false,0"
    assert format(0.1, ".17g") in emit_report([ReportRecord(id="x", measured={"v": 0.1})], "csv").decode()


def test_csv_has_a_line_per_record():
    records = [ReportRecord(id=f"r{i}", params={"i": i}, measured={"v": float(i)}) for i in range(1000)]
    assert len(emit_report(records, OutputFormat.CSV).decode().splitlines()) == 1001


def test_json_round_trip():
    records = [
        ReportRecord(id="a", params={"sizes": [3, 4]}, measured={"x": 0.1, "y": None}, key="x", bound=0.2),
        ReportRecord(id="b", measured={"x": 3.0}, key="x", bound=2.0, sense=Sense.GE, slack=0.5),
    ]
    payload = emit_report(records)
    assert json.loads(payload)[0]["id"] == "a"
    parsed = parse_report(payload)
    assert parsed == records
    assert all(record.recompute_pass() == record.passed for record in parsed)
    assert all_passed(parsed)
    assert not all_passed(parsed + [ReportRecord(id="c", measured={"x": 3.0}, key="x", bound=2.0)])


def test_parse_errors():
    with pytest.raises(InvalidInputError):
        parse_report(b"{not json")
    with pytest.raises(InvalidInputError):
        parse_report(b'{"id": "a"}')
