from .build import (
    PulserPlan, WeakPlan, build_strong_pulser, build_weak_pulser, compute_bounds, default_family,
    plan_strong_pulser, squad_period,
)
from .convert import CounterPulser, PulserCounter, counter_to_strong_pulser, strong_pulser_to_counter
from .leader import LeaderCounter, LeaderPulser
from .spec import CounterSpec, PulserSpec, WeakPulserSpec
from .strong import StrongPulser
from .weak import FilterOutcome, FilterParams, WeakPulser, filter_step, split_nodes

__all__ = [
    "CounterPulser", "CounterSpec", "FilterOutcome", "FilterParams", "LeaderCounter", "LeaderPulser",
    "PulserCounter", "PulserPlan", "PulserSpec", "StrongPulser", "WeakPlan", "WeakPulser",
    "WeakPulserSpec", "build_strong_pulser", "build_weak_pulser", "compute_bounds",
    "counter_to_strong_pulser", "default_family", "filter_step", "plan_strong_pulser",
    "split_nodes", "squad_period", "strong_pulser_to_counter",
]
