# -*- coding: utf-8 -*-
import json
from typing import List

import pytest

from setfn.__main__ import create_app
from setfn.reports import parse_report
from setfn.signals import record_emitted
from setfn.types import ExitCode


@pytest.fixture
def run(tmp_path):
    def run(*argv):
        output = tmp_path / "report.out"
        if output.exists():
            output.unlink()
        code = create_app().run(["--log-level", "WARNING", *argv, "--output", str(output)])
        return code, output.read_bytes() if output.exists() else None

    return run


def test_commands_are_registered():
    names = set(create_app().commands)
    assert {"check", "extract", "kp", "lorentz", "lattice-measure", "factorize", "verify", "selftest"} <= names


def test_kp(run):
    code, payload = run("kp", "--p", "1")
    assert code == ExitCode.OK
    (record,) = parse_report(payload)
    assert record.id == "kp"
    assert record.measured["kp"] == 1.0
    assert record.ms == 0.0


def test_invalid_option_exits_2(run):
    code, payload = run("kp", "--p=0")
    assert code == ExitCode.INVALID_INPUT
    assert payload is None


def test_malformed_input_exits_2(run, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"n": 2, "values": [0, 1,')
    code, payload = run("extract", "--input", str(path))
    assert code == ExitCode.INVALID_INPUT
    assert payload is None


def test_not_monotone_input_exits_3(run, tmp_path):
    path = tmp_path / "phi.json"
    path.write_text(json.dumps({"n": 2, "values": [0, 1, 0.5, 0.2]}))
    code, _ = run("extract", "--input", str(path))
    assert code == ExitCode.PRECONDITION


def test_lattice_f_length_exits_3(run):
    code, _ = run("lattice-measure", "--n", "3", "--f", "1", "1")
    assert code == ExitCode.PRECONDITION


def test_extract_from_file(run, tmp_path):
    path = tmp_path / "measure.json"
    path.write_text(json.dumps([{"n": 2, "values": [0, 0.25, 0.75, 1.0]}, {"n": 1, "values": [0, 2.0]}]))
    code, payload = run("extract", "--input", str(path))
    assert code == ExitCode.OK
    records = parse_report(payload)
    assert [record.id for record in records] == ["measure[0]", "measure[1]"]
    assert records[0].measured["objective"] == pytest.approx(1.0)
    assert records[1].measured["objective"] == pytest.approx(2.0)


def test_reports_are_reproducible(run):
    argv = ("check", "--family", "power", "--trials", "3", "--seed", "7")
    code, first = run(*argv)
    assert code == ExitCode.OK
    assert run(*argv)[1] == first
    assert run(*argv, "--workers", "2")[1] == first
    assert run("check", "--family", "power", "--trials", "3", "--seed", "8")[1] != first


def test_csv_output(run):
    code, payload = run("lorentz", "--trials", "2", "--format", "csv")
    assert code == ExitCode.OK
    lines = payload.decode().splitlines()
    assert lines[0].startswith("id,p,q,form,steps,")
    assert lines[0].endswith(",bound,pass,ms")
    assert len(lines) == 3
    assert all(line.endswith(",true,0") for line in lines[1:])


def test_records_are_signalled(run):
    seen = []

    def receiver(sender, record):
        seen.append((sender.name, record.id))

    record_emitted.connect(receiver)
    try:
        run("kp", "--p", "2")
    finally:
        record_emitted.disconnect(receiver)
    assert seen == [("kp", "kp")]


class Recording:
    calls: List[str] = []

    def __init__(self, app, tag):
        self.app = app
        self.tag = tag

    def __call__(self, config, context):
        Recording.calls.append(f"{self.tag}:{context.command.name}")
        return self.app(config, context)


def test_user_middleware_wraps_commands(tmp_path):
    app = create_app()
    app.add_middleware(Recording, tag="outer")
    assert repr(app.user_middleware[0]) == "Middleware(Recording, tag='outer')"
    code = app.run(["kp", "--p", "2", "--output", str(tmp_path / "kp.json")])
    assert code == ExitCode.OK
    assert Recording.calls == ["outer:kp"]
