from .counter import counter, counter_bound
from .squad import FiringSquad, FiringSquadSpec, GoWindow, firing_squad, go_schedule, go_window_adapter

__all__ = ["FiringSquad", "FiringSquadSpec", "GoWindow", "counter", "counter_bound", "firing_squad",
           "go_schedule", "go_window_adapter"]
