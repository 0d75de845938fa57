"""Checkers for the correctness conditions of the constructions.

Every checker returns a :class:`Verdict`.  Stabilisation properties report
the earliest round from which the condition holds for the rest of the trace
(``holds`` is false if that is past the horizon) together with the last
violation seen.  Given ``from_round``, a checker instead reports the first
violation at or after that round.  Which nodes are judged in a round follows
the trace's fault model (see :meth:`Trace.judged`).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from .engine import Trace
from .model import FaultModel


@dataclass
class Verdict:
    name: str
    holds: bool
    round: int | None
    witness: dict | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.holds

    def as_dict(self) -> dict:
        return {"property": self.name, "holds": self.holds, "round": self.round,
                "witness": self.witness, "detail": self.detail}


def measure(trace: Trace, prop: "PropertySpec") -> Verdict:
    return prop.check(trace)


class PropertySpec:
    name = "property"

    def check(self, trace: Trace) -> Verdict:
        raise NotImplementedError


def _settle(name: str, trace: Trace, bad: list[tuple[int, dict]], from_round: int | None) -> Verdict:
    """Turn a list of ``(round, witness)`` violations into a verdict."""
    if from_round is not None:
        late = [b for b in bad if b[0] >= from_round]
        if late:
            t, w = min(late, key=lambda b: b[0])
            return Verdict(name, False, t, w, f"violated at round {t}")
        return Verdict(name, True, from_round, None, f"holds from round {from_round}")
    if not bad:
        return Verdict(name, True, 1, None, "holds from round 1")
    t, w = max(bad, key=lambda b: b[0])
    ok = t < trace.horizon
    return Verdict(name, ok, t + 1, w, f"holds from round {t + 1}; last violated at round {t}")


def _agreement(values: Sequence[Any], nodes: Sequence[int]):
    seen: dict[Any, int] = {}
    for v in nodes:
        seen.setdefault(values[v], v)
    if len(seen) <= 1:
        return None
    return {"nodes": sorted(seen.values()), "values": {str(v): k for k, v in seen.items()}}


@dataclass
class CounterProperty(PropertySpec):
    """Agreement on the counter, and every node's counter advancing by one each round."""

    modulus: int
    channel: str = "counter"
    from_round: int | None = None
    name = "counter"

    def check(self, trace):
        vals = trace.channel(self.channel)
        bad = []
        H = trace.horizon
        for t in range(1, H + 1):
            nodes = trace.judged(t)
            row = vals[t - 1]
            w = _agreement(row, nodes)
            if w:
                bad.append((t, {"kind": "agreement", **w}))
                continue
            if t < H:
                nxt = vals[t]
                for v in trace.judged(t + 1):
                    if row[v] is None or nxt[v] != (row[v] + 1) % self.modulus:
                        bad.append((t, {"kind": "consistency", "nodes": [v], "values": [row[v], nxt[v]]}))
                        break
        return _settle(self.name, trace, bad, self.from_round)


def _collapse(trace: Trace, channel: str):
    """Per round: 1 if every judged node outputs 1, 0 if all output 0, None if they differ."""
    vals = trace.channel(channel)
    out = []
    for t, row in enumerate(vals, 1):
        bits = {1 if row[v] == 1 else 0 for v in trace.judged(t)}
        out.append(bits.pop() if len(bits) == 1 else (0 if not bits else None))
    return vals, out


@dataclass
class StrongPulseProperty(PropertySpec):
    """Pulses agree and repeat exactly every ``period`` rounds; reports the first stable pulse."""

    period: int
    channel: str = "pulse"
    name = "strong-pulse"

    def check(self, trace):
        vals, agg = _collapse(trace, self.channel)
        H = trace.horizon
        mixed = [t for t in range(1, H + 1) if agg[t - 1] is None]
        last_mixed = mixed[-1] if mixed else 0
        pulses = [t for t in range(last_mixed + 1, H + 1) if agg[t - 1] == 1]
        witness = None
        if last_mixed:
            row = vals[last_mixed - 1]
            witness = {"kind": "agreement", "round": last_mixed,
                       "nodes": sorted(v for v in trace.judged(last_mixed) if row[v] == 1)}
        if not pulses or H - pulses[-1] >= self.period:
            t = pulses[-1] + self.period if pulses else last_mixed + self.period
            return Verdict(self.name, False, None, witness,
                           f"no stable pulse pattern (expected a pulse by round {t})")
        i = len(pulses) - 1
        while i > 0 and pulses[i] - pulses[i - 1] == self.period:
            i -= 1
        t0 = pulses[i]
        if i > 0:
            witness = {"kind": "spacing", "round": t0, "previous": pulses[i - 1]}
        return Verdict(self.name, True, t0, witness, f"stable pulses every {self.period} rounds from {t0}")


@dataclass
class WeakPulseProperty(PropertySpec):
    """Agreement from some round on, followed by a pulse with ``gap - 1`` quiet rounds after it."""

    gap: int
    channel: str = "pulse"
    name = "weak-pulse"

    def good_pulses(self, trace) -> list[int]:
        _, agg = _collapse(trace, self.channel)
        H = trace.horizon
        mixed = [t for t in range(1, H + 1) if agg[t - 1] is None]
        start = (mixed[-1] if mixed else 0) + 1
        out = []
        for t in range(start, H - self.gap + 2):
            if agg[t - 1] == 1 and all(agg[u - 1] == 0 for u in range(t + 1, t + self.gap)):
                out.append(t)
        return out

    def check(self, trace):
        good = self.good_pulses(trace)
        if not good:
            return Verdict(self.name, False, None, None, "no good pulse after the last disagreement")
        return Verdict(self.name, True, good[0], {"good_pulses": good[:8]},
                       f"first good pulse at round {good[0]}")


@dataclass
class FiringSquadProperty(PropertySpec):
    """Agreement, safety and liveness of a firing squad, with response time ``response``.

    GO inputs are read from the trace.  ``support`` is the number of correct
    GO inputs that must fire the squad (f+1 for Byzantine faults, else 1).
    """

    f: int
    response: int | None = None
    fire: str = "fire"
    parts: tuple[str, ...] = ("agreement", "safety", "liveness")
    from_round: int | None = None
    support: int | None = None
    name = "firing-squad"

    def _support(self, trace):
        if self.support is not None:
            return self.support
        return self.f + 1 if trace.fault_model is FaultModel.BYZANTINE else 1

    def violations(self, trace) -> list[tuple[int, dict]]:
        fire = trace.channel(self.fire)
        go = trace.inputs()
        H = trace.horizon
        R = self.response
        model = trace.fault_model
        bad: list[tuple[int, dict]] = []
        if "agreement" in self.parts:
            for t in range(1, H + 1):
                w = _agreement([1 if x == 1 else 0 for x in fire[t - 1]], trace.judged(t))
                if w:
                    bad.append((t, {"kind": "agreement", **w}))
        if "safety" in self.parts:
            for t in range(1, H + 1):
                for v in trace.judged(t):
                    if fire[t - 1][v] != 1:
                        continue
                    if not self._justified(trace, go, fire, v, t, R, model):
                        bad.append((t, {"kind": "safety", "nodes": [v]}))
                        break
        if "liveness" in self.parts and R is not None:
            need = self._support(trace)
            correct = [v for v in range(trace.n) if v not in trace.faulty]
            for tg in range(1, H - R + 1):
                if model is FaultModel.CRASH:
                    alive = trace.judged(tg + 1)
                    pushers = [v for v in alive if go[tg - 1][v] == 1]
                else:
                    pushers = [v for v in correct if go[tg - 1][v] == 1]
                if len(pushers) < need:
                    continue
                fired = any(
                    trace.judged(tf) and all(fire[tf - 1][v] == 1 for v in trace.judged(tf))
                    for tf in range(tg + 1, tg + R + 1)
                )
                if not fired:
                    bad.append((tg, {"kind": "liveness", "nodes": pushers}))
        return bad

    def _justified(self, trace, go, fire, v, tf, R, model) -> bool:
        lo = 1 if R is None else max(1, tf - R)
        for tg in range(tf, lo - 1, -1):
            if tg < tf and fire[tg - 1][v] == 1:
                return False  # an earlier FIRE of v already used up any older GO
            if model is FaultModel.BYZANTINE:
                senders = [w for w in range(trace.n) if w not in trace.faulty]
            elif model is FaultModel.CRASH:
                gone = trace.crashed_by(tg - 1)
                senders = [w for w in range(trace.n) if w not in gone]
            else:
                senders = range(trace.n)
            if any(go[tg - 1][w] == 1 for w in senders):
                return True
        return False

    def check(self, trace):
        return _settle(self.name, trace, self.violations(trace), self.from_round)


@dataclass
class SilenceProperty(PropertySpec):
    """Judged nodes send no bits at all in rounds ``first..last``."""

    first: int = 1
    last: int | None = None
    name = "silence"

    def check(self, trace):
        last = self.last or trace.horizon
        for t in range(self.first, last + 1):
            rec = trace.round(t)
            loud = [v for v in trace.judged(t) if rec.bits[v]]
            if loud:
                return Verdict(self.name, False, t, {"nodes": loud}, f"bits sent in round {t}")
        return Verdict(self.name, True, self.first, None, "silent")


@dataclass
class MessageBoundProperty(PropertySpec):
    bound: int
    name = "message-bound"

    def check(self, trace):
        for t, rec in enumerate(trace.rounds, 1):
            for v in trace.judged(t):
                b = rec.bits[v]
                if b is not None and b > self.bound:
                    return Verdict(self.name, False, t, {"nodes": [v], "bits": b},
                                   f"{b} bits exceed the bound {self.bound}")
        return Verdict(self.name, True, 1, {"max_bits": trace.max_bits()}, "within bound")


def event_rounds(trace: Trace, channel: str) -> dict[int, list[int]]:
    """For each judged node, the rounds in which ``channel`` was 1."""
    vals = trace.channel(channel)
    out: dict[int, list[int]] = {}
    for t, row in enumerate(vals, 1):
        for v in trace.judged(t):
            if row[v] == 1:
                out.setdefault(v, []).append(t)
    return out


def acceptance_spacing(trace: Trace, channel: str, period: int, cooldown: int, after: int = 2):
    """Pairs ``(v, t, v2, t2)`` where an acceptance at ``v`` in round ``t > after`` is followed
    at ``v2`` first in round ``t2`` that is neither ``t + period`` nor later than ``t + cooldown``."""
    events = event_rounds(trace, channel)
    bad = []
    for v, rounds in events.items():
        for t in rounds:
            if t <= after:
                continue
            for v2, rounds2 in events.items():
                nxt = next((u for u in rounds2 if u > t), None)
                if nxt is None:
                    continue
                if nxt != t + period and nxt <= t + cooldown:
                    bad.append((v, t, v2, nxt))
    return bad


def union_spacing(trace: Trace, channel: str, period: int, cooldown: int, after: int = 2):
    """Gaps between consecutive rounds in which any judged node accepts, after round ``after``.

    Returns the offending ``(t, t2)`` pairs: consecutive acceptance rounds whose
    gap is neither ``period`` nor larger than ``cooldown``.
    """
    events = event_rounds(trace, channel)
    rounds = sorted({t for ts in events.values() for t in ts if t > after})
    return [(t, t2) for t, t2 in zip(rounds, rounds[1:])
            if t2 - t != period and t2 - t <= cooldown]
