from __future__ import annotations

from ..errors import ConfigurationError
from ..pulsers.build import build_strong_pulser, plan_strong_pulser
from ..pulsers.leader import LeaderCounter
from ..pulsers.spec import CounterSpec
from ..sim.model import FaultModel


def counter_bound(n: int, f: int, modulus: int, family=None, fault_model=FaultModel.BYZANTINE) -> int:
    """Stabilisation bound of :func:`counter`: the strong pulser's bound without its final period."""
    if f == 0:
        return 2
    plan = plan_strong_pulser(n, f, modulus, family, fault_model)
    return plan.weak.stabilisation + plan.consensus_rounds + 1


def counter(n: int, f: int, modulus: int, family=None, fault_model: FaultModel | str = FaultModel.BYZANTINE):
    """Synchronous ``modulus``-counter; returns ``(protocol, CounterSpec)``.

    For ``f >= 1`` this is the strong pulser of period ``modulus`` read through
    its ``counter`` output, which is consistent a full period before the
    pulses are.
    """
    model = FaultModel.parse(fault_model)
    if modulus < 2:
        raise ConfigurationError(f"modulus must be at least 2, got {modulus}")
    if f == 0:
        proto = LeaderCounter(n, modulus)
    else:
        proto, _ = build_strong_pulser(n, f, modulus, family, model)
    bound = counter_bound(n, f, modulus, family, model)
    proto.stabilisation = bound
    return proto, CounterSpec(n, f, modulus, bound, proto.message_bound, model)
