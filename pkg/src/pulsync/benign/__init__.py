from .crash import (
    CrashCounter, crash_consensus, crash_counter, crash_counter_bound, crash_firing_squad,
)
from .omission import OmissionSuite, omission_suite

__all__ = ["CrashCounter", "OmissionSuite", "crash_consensus", "crash_counter", "crash_counter_bound",
           "crash_firing_squad", "omission_suite"]
