"""Explicit-state and bounded model checking of the hotel room locking protocol."""

from .bounded import bounded_check, bounded_sweep
from .checker import (
    CheckSemantics,
    CounterExample,
    Deadlock,
    DepthExhausted,
    ExplorationLimitExceeded,
    Property,
    Trace,
    TransitionSystem,
    Verified,
    bfs_check,
    dfs_check,
    reachable_stats,
)
from .hybrid import derive_initial_generator, hybrid_check
from .model import ActionLabel, HotelConfig, HotelState, enabled_steps, enumerate_initial_states
from .symmetry import canonicalize, count_canonical_initial_states
from .systems import NO_BAD_ENTRY, hotel_system

__all__ = [
    "ActionLabel", "CheckSemantics", "CounterExample", "Deadlock", "DepthExhausted",
    "ExplorationLimitExceeded", "HotelConfig", "HotelState", "NO_BAD_ENTRY", "Property",
    "Trace", "TransitionSystem", "Verified", "bfs_check", "bounded_check", "bounded_sweep",
    "canonicalize", "count_canonical_initial_states", "derive_initial_generator",
    "dfs_check", "enabled_steps", "enumerate_initial_states", "hotel_system",
    "hybrid_check", "reachable_stats",
]
