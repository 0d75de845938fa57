from __future__ import annotations

import csv
import io
import json
from typing import Any, Iterable, Mapping

from .engine import Trace
from .schema import payload_to_json


def state_to_json(state: Any):
    if state is None or isinstance(state, (int, str, float, bool)):
        return state
    if hasattr(state, "_asdict"):
        return {k: state_to_json(v) for k, v in state._asdict().items()}
    if isinstance(state, tuple):
        return [state_to_json(x) for x in state]
    raise TypeError(f"cannot serialise state value {state!r}")


def _messages(delivered) -> list:
    msgs = []
    for w, row in enumerate(delivered):
        for u, p in enumerate(row):
            if p is not None:
                msgs.append([u, w, payload_to_json(p)])
    return msgs


def trace_to_json(trace: Trace) -> dict:
    """``{meta, initial, rounds: [{round, states, messages, outputs, bits, inputs}]}``."""
    rounds = []
    for t, rec in enumerate(trace.rounds, 1):
        entry = {
            "round": t,
            "outputs": [None if o is None else list(o) for o in rec.outputs],
            "bits": rec.bits,
        }
        if rec.states is not None:
            entry["states"] = [state_to_json(s) for s in rec.states]
        if rec.delivered is not None:
            entry["messages"] = _messages(rec.delivered)
        if rec.inputs is not None:
            entry["inputs"] = rec.inputs
        rounds.append(entry)
    doc = {"meta": dict(trace.meta, outputs=list(trace.output_names)), "rounds": rounds}
    if trace.initial is not None:
        doc["initial"] = {
            "states": [state_to_json(s) for s in trace.initial.states],
            "messages": _messages(trace.initial.inbox),
        }
    return doc


def dumps(doc: Mapping) -> str:
    """Canonical JSON text: identical runs give identical bytes."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def write_trace(trace: Trace, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(trace_to_json(trace)))
        fh.write("\n")


SUMMARY_COLUMNS = ("run_id", "seed", "adversary", "stabilisation_round", "bound", "max_bits", "verdicts")


def summary_csv(rows: Iterable[Mapping]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SUMMARY_COLUMNS, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return buf.getvalue()
