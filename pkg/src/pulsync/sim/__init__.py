from .adversary import BYZANTINE_SUITE, OMISSION_SUITE, Strategy, get_strategy, strategy_names
from .engine import InitialCondition, Trace, default_horizon, inject_arbitrary_state, run
from .model import FaultModel, NetworkSpec
from .protocol import Protocol

__all__ = [
    "BYZANTINE_SUITE", "FaultModel", "InitialCondition", "NetworkSpec", "OMISSION_SUITE",
    "Protocol", "Strategy", "Trace", "default_horizon", "get_strategy", "inject_arbitrary_state",
    "run", "strategy_names",
]
