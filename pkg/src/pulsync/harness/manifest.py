"""Experiment manifests: what to build, how to attack it, which seeds to run.

A manifest is a JSON object::

    {"schema_version": 1,
     "construction": {"kind": "strong-pulser", "n": 4, "f": 1, "period": 12},
     "scenario": {"adversary": ["silent", "random"], "faulty": "auto"},
     "seeds": "0..9", "horizon": null}

``construction.kind`` is one of :data:`KINDS`.  ``scenario.faulty`` is a list
of node ids, ``"auto"`` (f nodes drawn per seed), ``"none"`` or ``"block:I"``
(as many faults as possible inside top-level block I).  Firing squads also
take ``scenario.go`` (``{round: [nodes]}``) and ``scenario.go_window``; crash
runs may give ``scenario.crash`` (``{node: [round, [reached nodes]]}``).
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any, Callable

from ..applications import counter, firing_squad, go_schedule, go_window_adapter
from ..benign import crash_counter, crash_firing_squad
from ..consensus import ConsensusProtocol, from_name
from ..errors import ConfigurationError
from ..pulsers import build_strong_pulser, build_weak_pulser, compute_bounds
from ..sim import NetworkSpec, default_horizon, inject_arbitrary_state, run
from ..sim.adversary import BYZANTINE_SUITE, OMISSION_SUITE, CrashSchedule, get_strategy
from ..sim.engine import Trace, derive_rng
from ..sim.model import FaultModel
from ..sim.properties import (
    CounterProperty, FiringSquadProperty, MessageBoundProperty, StrongPulseProperty, Verdict,
    WeakPulseProperty,
)
from ..thresholds import thresholds

SCHEMA_VERSION = 1
KINDS = ("strong-pulser", "weak-pulser", "counter", "firing-squad", "crash-counter", "crash-squad",
         "consensus")


@dataclass
class Setup:
    kind: str
    protocol: Any
    n: int
    f: int
    fault_model: FaultModel
    bound: int | None
    period: int
    properties: list
    tree: dict | None = None
    inputs: Callable | None = None
    clean_start: bool = False
    extra: dict = field(default_factory=dict)

    @property
    def horizon(self) -> int:
        if self.clean_start:
            return self.protocol.default_horizon
        return default_horizon(self.bound, self.period)


def parse_seeds(text) -> list[int]:
    if isinstance(text, list):
        if len(text) == 2 and all(isinstance(x, int) for x in text):
            return list(range(text[0], text[1] + 1))
        raise ConfigurationError("seeds list must be [first, last]")
    if isinstance(text, int):
        return [text]
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*", str(text))
    if not m:
        raise ConfigurationError(f"seeds must look like A..B, got {text!r}")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    if hi < lo:
        raise ConfigurationError(f"empty seed range {text!r}")
    return list(range(lo, hi + 1))


def load_manifest(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return validate(doc)


def validate(doc: dict) -> dict:
    if not isinstance(doc, dict):
        raise ConfigurationError("manifest must be a JSON object")
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigurationError(f"unsupported manifest schema_version {version}")
    con = doc.get("construction")
    if not isinstance(con, dict) or con.get("kind") not in KINDS:
        raise ConfigurationError(f"construction.kind must be one of {', '.join(KINDS)}")
    for key in ("n", "f"):
        if not isinstance(con.get(key), int):
            raise ConfigurationError(f"construction.{key} must be an integer")
    out = dict(doc, schema_version=SCHEMA_VERSION)
    out.setdefault("scenario", {})
    out.setdefault("seeds", "0..0")
    return out


def _family(con: dict, model: FaultModel):
    name = con.get("consensus", "phase-king")
    if name != "phase-king":
        raise ConfigurationError(f"pulsers are built from phase-king only, got {name!r}")
    return None


def build(con: dict, scenario: dict | None = None) -> Setup:
    """Instantiate the construction described by a manifest's ``construction`` block."""
    scenario = scenario or {}
    kind = con["kind"]
    n, f = con["n"], con["f"]
    model = FaultModel.parse(con.get("fault_model", "crash" if kind.startswith("crash") else "byzantine"))
    if kind == "strong-pulser":
        _family(con, model)
        period = con.get("period", 12)
        proto, spec = build_strong_pulser(n, f, period, fault_model=model)
        return Setup(kind, proto, n, f, model, spec.stabilisation, period,
                     [StrongPulseProperty(period), MessageBoundProperty(spec.message_bits)],
                     tree=proto.plan.as_dict() if hasattr(proto, "plan") else None)
    if kind == "weak-pulser":
        period = con.get("period", 12)
        proto, spec = build_weak_pulser(n, f, period, fault_model=model)
        return Setup(kind, proto, n, f, model, spec.stabilisation, spec.gap,
                     [WeakPulseProperty(spec.gap), MessageBoundProperty(spec.message_bits)],
                     tree=compute_bounds(n, f, period, fault_model=model).as_dict())
    if kind == "counter":
        modulus = con.get("modulus", 8)
        proto, spec = counter(n, f, modulus, fault_model=model)
        tree = compute_bounds(n, f, modulus, fault_model=model).as_dict() if f else None
        return Setup(kind, proto, n, f, model, spec.stabilisation, modulus,
                     [CounterProperty(modulus), MessageBoundProperty(spec.message_bits)], tree=tree)
    if kind in ("firing-squad", "crash-squad"):
        if kind == "crash-squad":
            proto, spec = crash_firing_squad(n, f, con.get("period"))
        else:
            proto, spec = firing_squad(n, f, con.get("period"), fault_model=model)
        go = go_schedule({int(t): nodes for t, nodes in scenario.get("go", {}).items()})
        window = int(scenario.get("go_window", 1))
        inputs = go_window_adapter(window)(go) if window > 1 else go
        tree = None
        if kind == "firing-squad":
            tree = compute_bounds(n, f, spec.period, fault_model=model).as_dict()
        return Setup(kind, proto, n, f, model, spec.stabilisation, spec.period,
                     [FiringSquadProperty(f, spec.response), MessageBoundProperty(spec.message_bits)],
                     tree=tree, inputs=inputs, extra={"response": spec.response})
    if kind == "crash-counter":
        modulus = con.get("modulus", 8)
        proto, spec = crash_counter(n, f, modulus)
        return Setup(kind, proto, n, f, FaultModel.CRASH, spec.stabilisation, modulus,
                     [CounterProperty(modulus), MessageBoundProperty(spec.message_bits)])
    if kind == "consensus":
        routine = from_name(con.get("consensus", "phase-king"), n, f, model)
        inputs = con.get("inputs")
        if inputs is None or len(inputs) != n:
            raise ConfigurationError("consensus runs need construction.inputs with one value per node")
        proto = ConsensusProtocol(routine, inputs)
        return Setup(kind, proto, n, f, model, routine.rounds, 1,
                     [MessageBoundProperty(routine.spec.message_bits)], clean_start=True,
                     extra={"routine": routine.name})
    raise ConfigurationError(f"unknown construction kind {kind!r}")


def place_faults(setup: Setup, how, seed: int) -> frozenset[int]:
    n, f = setup.n, setup.f
    if how is None or how == "auto":
        rng = derive_rng(seed, "placement")
        return frozenset(rng.sample(range(n), f))
    if how == "none":
        return frozenset()
    if isinstance(how, list):
        return frozenset(int(v) for v in how)
    m = re.fullmatch(r"block:(\d+)", str(how))
    if m and setup.tree and setup.tree.get("weak"):
        n0, n1 = setup.tree["weak"]["split"]
        blocks = (list(range(n0)), list(range(n0, n)))
        inside = blocks[int(m.group(1)) % 2]
        outside = blocks[1 - int(m.group(1)) % 2]
        rng = derive_rng(seed, "placement")
        chosen = rng.sample(inside, min(f, len(inside)))
        chosen += rng.sample(outside, f - len(chosen))
        return frozenset(chosen)
    raise ConfigurationError(f"cannot place faults as {how!r}")


def _crash_strategy(scenario: dict):
    table = scenario.get("crash")
    if not table:
        return None
    return CrashSchedule({int(u): (int(r), tuple(keep)) for u, (r, keep) in table.items()})


def execute(setup: Setup, adversary: str, seed: int, horizon: int | None, scenario: dict,
            record: str = "outputs", meta: dict | None = None) -> Trace:
    faulty = place_faults(setup, scenario.get("faulty"), seed)
    strategy = _crash_strategy(scenario) if adversary == "crash-schedule" else get_strategy(adversary)
    if strategy is None:
        raise ConfigurationError("adversary crash-schedule needs scenario.crash")
    net = NetworkSpec(setup.n, setup.f, setup.fault_model, faulty)
    initial = inject_arbitrary_state(setup.protocol, seed, zero=setup.clean_start)
    return run(net, setup.protocol, strategy, seed, horizon or setup.horizon, inputs=setup.inputs,
               initial=initial, record=record, meta=meta)


def evaluate(setup: Setup, trace: Trace) -> tuple[int | None, list[Verdict], bool]:
    """Check every property; returns ``(stabilisation round, verdicts, all good)``."""
    verdicts = [p.check(trace) for p in setup.properties]
    ok = all(v.holds for v in verdicts)
    stab = None
    if verdicts and verdicts[0].name != "message-bound":
        stab = verdicts[0].round
        if setup.bound is not None and not setup.clean_start and (stab is None or stab > setup.bound):
            ok = False
    if setup.kind == "consensus":
        final = trace.round(trace.horizon)
        decided = {final.outputs[v][0] for v in trace.judged(trace.horizon)}
        agree = Verdict("agreement", len(decided) == 1 and None not in decided, trace.horizon - 1,
                        None, f"decisions {sorted(map(str, decided))}")
        verdicts.insert(0, agree)
        ok = ok and agree.holds
        stab = trace.horizon - 1
    return stab, verdicts, ok


def default_adversaries(setup: Setup) -> list[str]:
    if setup.f == 0:
        return ["honest"]
    if setup.fault_model is FaultModel.OMISSION:
        return list(OMISSION_SUITE)
    if setup.fault_model is FaultModel.CRASH:
        return ["random-crash"]
    return list(BYZANTINE_SUITE)


def sweep(doc: dict, *, seeds=None, adversaries=None, horizon=None, record="outputs", on_trace=None):
    """Run every ``(adversary, seed)`` pair of a manifest; yields summary rows."""
    doc = validate(doc)
    scenario = doc.get("scenario", {})
    setup = build(doc["construction"], scenario)
    seeds = seeds if seeds is not None else parse_seeds(doc.get("seeds", "0..0"))
    if adversaries is None:
        adv = scenario.get("adversary") or default_adversaries(setup)
        adversaries = [adv] if isinstance(adv, str) else list(adv)
    horizon = horizon or doc.get("horizon")
    for adversary in adversaries:
        for seed in seeds:
            single = dict(doc, seeds=str(seed), horizon=horizon,
                          scenario=dict(scenario, adversary=adversary))
            trace = execute(setup, adversary, seed, horizon, scenario, record,
                            meta={"manifest": single})
            stab, verdicts, ok = evaluate(setup, trace)
            row = {
                "run_id": f"{adversary}-{seed}",
                "seed": seed,
                "adversary": adversary,
                "stabilisation_round": stab,
                "bound": setup.bound,
                "max_bits": trace.max_bits(),
                "verdicts": ";".join(f"{v.name}:{'ok' if v.holds else 'violated'}" for v in verdicts),
                "ok": ok,
                "details": [v.as_dict() for v in verdicts],
            }
            if on_trace:
                on_trace(row, trace)
            yield row


def describe_bounds(con: dict) -> dict:
    setup = build(con, {})
    out = {"kind": setup.kind, "n": setup.n, "f": setup.f, "fault_model": setup.fault_model.value,
           "stabilisation_bound": setup.bound, "message_bound": setup.protocol.message_bound,
           "period": setup.period, "thresholds": thresholds(setup.fault_model, setup.n, setup.f).as_dict()}
    out.update(setup.extra)
    if setup.tree:
        out["construction"] = setup.tree
    return out
