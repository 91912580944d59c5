"""Command-line interface."""

from __future__ import annotations

import csv
import io
import json

import pytest

from stabkit.cli import RunConfig, emit, main, run


def _capture(capsys, argv):
    code = main(argv)
    return code, capsys.readouterr().out


def test_enumerate_sigma_count(capsys):
    code, out = _capture(capsys, ["enumerate-sigma", "--t", "4", "--d", "2", "--emit", "count"])
    assert code == 0
    assert out.strip() == "30"


def test_enumerate_o_count(capsys):
    code, out = _capture(capsys, ["enumerate-o", "--t", "4", "--d", "2", "--emit", "count"])
    assert code == 0
    assert out.strip() == "24"


def test_json_round_trip(capsys):
    code, out = _capture(capsys, ["moments", "--t", "3", "--n", "1", "--d", "2", "--check"])
    assert code == 0
    payload = json.loads(out)
    assert payload["config"]["command"] == "moments"
    assert payload["wall_clock"] is None
    assert all(r["status"] == "pass" for r in payload["records"])


def test_csv_rows_match_records():
    rep = run(RunConfig(command="verify-all", profile="quick"))
    text = emit(rep, "csv").decode()
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == len(rep.records)
    assert {"name", "check_id", "status", "measured", "bound", "tolerance"} <= set(rows[0])


def test_output_deterministic():
    cfg = RunConfig(command="test", protocol="mc", seed=7, shots=2000)
    a = emit(run(cfg), "json")
    b = emit(run(cfg), "json")
    assert a == b


def test_verify_all_quick_passes(capsys):
    code, out = _capture(capsys, ["verify-all", "--profile", "quick"])
    assert code == 0
    payload = json.loads(out)
    assert payload["records"]
    assert all(r["status"] in ("pass", "skip") for r in payload["records"])


def test_text_table_format():
    rep = run(RunConfig(command="double-cosets", t=4, d=2))
    text = emit(rep, "text-table").decode()
    assert text.splitlines()[0].startswith("name")
    assert len(text.splitlines()) == len(rep.records) + 1


def test_test_command_requires_seed():
    with pytest.raises(SystemExit):
        run(RunConfig(command="test", protocol="mc", seed=None))


def test_unknown_emit_format():
    rep = run(RunConfig(command="enumerate-sigma", t=3, d=3))
    with pytest.raises(ValueError):
        emit(rep, "yaml")


def test_design_command_qutrit(capsys):
    code, out = _capture(capsys, ["design", "--d", "3", "--t", "3", "--n", "1"])
    assert code == 0
    payload = json.loads(out)
    gaps = [r for r in payload["records"] if r["name"] == "design"]
    assert gaps and float(gaps[0]["measured"]) < 1e-8
