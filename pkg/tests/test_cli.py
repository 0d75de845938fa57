import csv
import io
import json

import pytest

from pulsync.harness.cli import main

COUNTER_SUITE = ["silent", "crash-mimic", "random", "equivocator", "spurious-pulser", "input-flipper"]


def _manifest(tmp_path, construction, scenario, seeds="0..0", horizon=None, name="m.json"):
    doc = {"schema_version": 1, "construction": construction, "scenario": scenario, "seeds": seeds}
    if horizon is not None:
        doc["horizon"] = horizon
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_counter_sweep_writes_one_row_per_run(tmp_path):
    m = _manifest(tmp_path, {"kind": "counter", "n": 4, "f": 1, "modulus": 8},
                  {"adversary": COUNTER_SUITE, "faulty": "auto"}, seeds="0..99")
    out = tmp_path / "out"
    assert main(["run", "--manifest", m, "--format", "csv", "--out", str(out), "--quiet"]) == 0
    rows = list(csv.DictReader(io.StringIO((out / "summary.csv").read_text())))
    assert len(rows) == 600
    assert list(rows[0]) == ["run_id", "seed", "adversary", "stabilisation_round", "bound", "max_bits",
                             "verdicts"]
    assert all(int(r["stabilisation_round"]) <= int(r["bound"]) == 195 for r in rows)
    assert {r["adversary"] for r in rows} == set(COUNTER_SUITE)


def test_squad_period_too_short_is_a_configuration_error(tmp_path, capsys):
    m = _manifest(tmp_path, {"kind": "firing-squad", "n": 4, "f": 1, "period": 6},
                  {"adversary": ["silent"], "faulty": "auto"})
    assert main(["run", "--manifest", m]) == 2
    assert "must exceed" in capsys.readouterr().err


def test_unknown_schema_version_exits_two(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"schema_version": 9, "construction": {"kind": "counter"}}))
    assert main(["run", "--manifest", str(path)]) == 2


def test_missing_manifest_exits_two():
    assert main(["run"]) == 2


def test_short_horizon_reports_a_violation(tmp_path, capsys):
    m = _manifest(tmp_path, {"kind": "counter", "n": 4, "f": 1, "modulus": 8},
                  {"adversary": ["random"], "faulty": [1]}, horizon=40)
    assert main(["run", "--manifest", m, "--quiet"]) == 1
    assert "violation in run random-0" in capsys.readouterr().err


def test_trace_replays_byte_for_byte(tmp_path, capsys):
    m = _manifest(tmp_path, {"kind": "crash-counter", "n": 4, "f": 3, "modulus": 8},
                  {"adversary": ["random-crash"], "faulty": [0, 2]}, seeds="3..4")
    out = tmp_path / "out"
    assert main(["run", "--manifest", m, "--traces", "--out", str(out), "--quiet"]) == 0
    traces = sorted(out.glob("trace_*.json"))
    assert len(traces) == 2
    capsys.readouterr()
    assert main(["run", "--replay", str(traces[1])]) == 0
    assert "replay identical" in capsys.readouterr().out


def test_tampered_trace_does_not_replay(tmp_path, capsys):
    m = _manifest(tmp_path, {"kind": "crash-counter", "n": 4, "f": 3, "modulus": 8},
                  {"adversary": ["random-crash"], "faulty": [0]})
    out = tmp_path / "out"
    assert main(["run", "--manifest", m, "--traces", "--out", str(out), "--quiet"]) == 0
    [trace] = out.glob("trace_*.json")
    doc = json.loads(trace.read_text())
    doc["meta"]["tampered"] = True
    trace.write_text(json.dumps(doc))
    assert main(["run", "--replay", str(trace)]) == 1


def test_output_directory_from_environment(tmp_path, monkeypatch):
    m = _manifest(tmp_path, {"kind": "crash-counter", "n": 4, "f": 3, "modulus": 8},
                  {"adversary": ["random-crash"], "faulty": [1]}, seeds="0..2")
    monkeypatch.setenv("PULSYNC_OUT", str(tmp_path / "env"))
    assert main(["run", "--manifest", m, "--quiet"]) == 0
    rows = json.loads((tmp_path / "env" / "summary.json").read_text())
    assert [r["seed"] for r in rows] == [0, 1, 2]


def _bounds(capsys, *argv):
    assert main(["bounds", *argv]) == 0
    return json.loads(capsys.readouterr().out)


def test_bounds_leader_case(capsys):
    doc = _bounds(capsys, "--n", "1", "--f", "0", "--period", "5")
    assert (doc["stabilisation_bound"], doc["message_bound"]) == (6, 1)
    assert doc["construction"]["kind"] == "leader"


def test_bounds_grow_with_resilience(capsys):
    small = _bounds(capsys, "--n", "4", "--f", "1", "--period", "12")
    assert (small["stabilisation_bound"], small["message_bound"]) == (236, 12)
    large = _bounds(capsys, "--n", "10", "--f", "3", "--period", "24")
    assert (large["stabilisation_bound"], large["message_bound"]) == (687, 23)
    assert large["thresholds"]["support"] == 4


def test_bounds_from_a_manifest(tmp_path, capsys):
    m = _manifest(tmp_path, {"kind": "crash-counter", "n": 4, "f": 3, "modulus": 8}, {"adversary": ["silent"]})
    doc = _bounds(capsys, "--manifest", m)
    assert doc["stabilisation_bound"] == 4
