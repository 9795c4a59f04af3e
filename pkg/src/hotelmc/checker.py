"""Explicit-state search over a pluggable transition system.

The checker knows nothing about hotels.  A :class:`TransitionSystem` supplies
initial states, labelled successors and an injective byte encoding; a
:class:`Property` supplies the state and/or step predicate being checked.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

LABEL_AWARE = "label"
DELTA = "delta"


@dataclass(frozen=True)
class TransitionSystem:
    initial_states: Callable[[], Iterable[Any]]
    successors: Callable[[Any], Iterable[tuple[Any, Any]]]
    encode: Callable[[Any], bytes]
    # conjoined into the next-state relation: (s, label, s2) -> keep?
    step_filter: Callable[[Any, Any, Any], bool] | None = None
    # folds symmetric states onto one representative in the visited store
    canonicalize: Callable[[Any], Any] | None = None
    # maps internal (e.g. product) states to the states a trace reports
    view: Callable[[Any], Any] | None = None

    def steps(self, s) -> list[tuple[Any, Any]]:
        if self.step_filter is None:
            return list(self.successors(s))
        return [(lab, s2) for lab, s2 in self.successors(s) if self.step_filter(s, lab, s2)]

    def project(self, s):
        return s if self.view is None else self.view(s)


@dataclass(frozen=True)
class Property:
    name: str
    step: Callable[[Any, Any, Any], bool] | None = None
    state: Callable[[Any], bool] | None = None


@dataclass(frozen=True)
class CheckSemantics:
    stutter_mode: str = LABEL_AWARE
    deadlock_policy: str = "ignore"
    # delta mode only: a state whose every successor is itself counts as deadlocked
    strict_deadlock: bool = False
    search: str = "bfs"
    max_depth: int | None = None
    fingerprint: bool = False
    max_states: int | None = None

    def __post_init__(self):
        if self.stutter_mode not in (LABEL_AWARE, DELTA):
            raise ValueError(f"unknown stutter mode {self.stutter_mode!r}")
        if self.deadlock_policy not in ("ignore", "flag"):
            raise ValueError(f"unknown deadlock policy {self.deadlock_policy!r}")
        if self.search not in ("bfs", "dfs"):
            raise ValueError(f"unknown search {self.search!r}")
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")

    @classmethod
    def dfs(cls, max_depth: int = 100, **kw) -> CheckSemantics:
        return cls(search="dfs", max_depth=max_depth, **kw)


@dataclass(frozen=True)
class Trace:
    states: tuple
    labels: tuple

    def __post_init__(self):
        if not self.states or len(self.labels) != len(self.states) - 1:
            raise ValueError("a trace has one more state than labels")

    def __len__(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class Verified:
    states_explored: int
    diameter: int
    stats: dict = field(default_factory=dict, compare=False)
    kind = "verified"


@dataclass(frozen=True)
class CounterExample:
    trace: Trace
    violated_property: str
    states_explored: int = 0
    kind = "counterexample"


@dataclass(frozen=True)
class DepthExhausted:
    max_depth: int
    states_explored: int
    kind = "depth_exhausted"


@dataclass(frozen=True)
class Deadlock:
    trace: Trace
    states_explored: int = 0
    kind = "deadlock"


Verdict = Verified | CounterExample | DepthExhausted | Deadlock


class ExplorationLimitExceeded(RuntimeError):
    """The visited store outgrew its budget (or memory ran out)."""

    def __init__(self, states_explored: int, message: str = "state budget exhausted"):
        super().__init__(f"{message} after {states_explored} states")
        self.states_explored = states_explored


def fingerprint64(data: bytes) -> bytes:
    # unsound under collision; only for memory experiments
    return hashlib.blake2b(data, digest_size=8).digest()


def _store_key(ts: TransitionSystem, sem: CheckSemantics, s) -> bytes:
    rep = s if ts.canonicalize is None else ts.canonicalize(s)
    data = ts.encode(rep)
    return fingerprint64(data) if sem.fingerprint else data


def _is_stutter(ts: TransitionSystem, s, s2) -> bool:
    return ts.project(s) == ts.project(s2)


def _step_ok(prop: Property | None, ts: TransitionSystem, sem: CheckSemantics, s, label, s2) -> bool:
    if prop is None or prop.step is None:
        return True
    if sem.stutter_mode == DELTA and _is_stutter(ts, s, s2):
        return True
    return prop.step(ts.project(s), label, ts.project(s2))


def _state_ok(prop: Property | None, ts: TransitionSystem, s) -> bool:
    return prop is None or prop.state is None or prop.state(ts.project(s))


def _deadlocked(ts: TransitionSystem, sem: CheckSemantics, s, steps) -> bool:
    if not steps:
        return True
    if sem.stutter_mode == DELTA and sem.strict_deadlock:
        return all(_is_stutter(ts, s, s2) for _, s2 in steps)
    return False


def _make_trace(ts: TransitionSystem, states, labels) -> Trace:
    return Trace(tuple(ts.project(s) for s in states), tuple(labels))


def replay(ts: TransitionSystem, start, labels) -> list:
    """Re-derive the states reached from ``start`` along ``labels``."""
    states = [start]
    for lab in labels:
        for l2, s2 in ts.steps(states[-1]):
            if l2 == lab:
                states.append(s2)
                break
        else:
            raise ValueError(f"label {lab!r} not enabled during replay")
    return states


def _guard_budget(sem: CheckSemantics, n: int):
    if sem.max_states is not None and n > sem.max_states:
        raise ExplorationLimitExceeded(n)


class _PredecessorStore:
    """Visited set that remembers one (predecessor, label) record per state."""

    def __init__(self):
        self.pred: dict[bytes, tuple[bytes | None, Any]] = {}
        self.roots: dict[bytes, Any] = {}

    def __contains__(self, key) -> bool:
        return key in self.pred

    def __len__(self) -> int:
        return len(self.pred)

    def add_root(self, key, state):
        self.pred[key] = (None, None)
        self.roots[key] = state

    def add(self, key, parent_key, label):
        self.pred[key] = (parent_key, label)

    def path_to(self, ts: TransitionSystem, key) -> tuple[list, list]:
        labels = []
        while True:
            parent, label = self.pred[key]
            if parent is None:
                break
            labels.append(label)
            key = parent
        labels.reverse()
        return replay(ts, self.roots[key], labels), labels


def bfs_check(ts: TransitionSystem, prop: Property | None, sem: CheckSemantics = CheckSemantics()) -> Verdict:
    """Breadth-first search; the first violation reported has minimal length."""
    store = _PredecessorStore()
    frontier: deque = deque()
    deadlocks = 0
    cut = False
    diameter = 0
    try:
        for s in ts.initial_states():
            key = _store_key(ts, sem, s)
            if key in store:
                continue
            store.add_root(key, s)
            _guard_budget(sem, len(store))
            if not _state_ok(prop, ts, s):
                return CounterExample(_make_trace(ts, [s], []), prop.name, len(store))
            frontier.append((s, key, 0))

        while frontier:
            s, key, depth = frontier.popleft()
            if sem.max_depth is not None and depth >= sem.max_depth:
                if ts.steps(s):
                    cut = True
                continue
            steps = ts.steps(s)
            if _deadlocked(ts, sem, s, steps):
                deadlocks += 1
                if sem.deadlock_policy == "flag":
                    states, labels = store.path_to(ts, key)
                    return Deadlock(_make_trace(ts, states, labels), len(store))
            for label, s2 in steps:
                if not _step_ok(prop, ts, sem, s, label, s2):
                    states, labels = store.path_to(ts, key)
                    trace = _make_trace(ts, states + [s2], labels + [label])
                    return CounterExample(trace, prop.name, len(store))
                key2 = _store_key(ts, sem, s2)
                if key2 in store:
                    continue
                store.add(key2, key, label)
                _guard_budget(sem, len(store))
                diameter = max(diameter, depth + 1)
                if not _state_ok(prop, ts, s2):
                    states, labels = store.path_to(ts, key2)
                    return CounterExample(_make_trace(ts, states, labels), prop.name, len(store))
                frontier.append((s2, key2, depth + 1))
    except MemoryError:
        raise ExplorationLimitExceeded(len(store), "out of memory") from None

    if cut:
        return DepthExhausted(sem.max_depth, len(store))
    return Verified(len(store), diameter, {"deadlocks": deadlocks})


def dfs_check(ts: TransitionSystem, prop: Property | None, sem: CheckSemantics = CheckSemantics.dfs()) -> Verdict:
    """Depth-first search cut at ``sem.max_depth`` steps.

    A state is re-expanded when it is reached again at a smaller depth, so a
    completed search without cuts has seen every reachable state.
    """
    max_depth = sem.max_depth if sem.max_depth is not None else 100
    best_depth: dict[bytes, int] = {}
    deadlocks = 0
    cut = False
    diameter = 0
    try:
        for root in ts.initial_states():
            rkey = _store_key(ts, sem, root)
            if rkey in best_depth:
                continue
            best_depth[rkey] = 0
            _guard_budget(sem, len(best_depth))
            if not _state_ok(prop, ts, root):
                return CounterExample(_make_trace(ts, [root], []), prop.name, len(best_depth))
            path_states = [root]
            path_labels: list = []
            stack = [iter(_expand(ts, sem, root, 0, max_depth))]
            while stack:
                item = next(stack[-1], None)
                if item is None:
                    stack.pop()
                    path_states.pop()
                    if path_labels:
                        path_labels.pop()
                    continue
                tag, label, s2 = item
                s = path_states[-1]
                depth = len(path_states) - 1
                if tag == "cut":
                    cut = True
                    continue
                if tag == "deadlock":
                    deadlocks += 1
                    if sem.deadlock_policy == "flag":
                        return Deadlock(_make_trace(ts, path_states, path_labels), len(best_depth))
                    continue
                if not _step_ok(prop, ts, sem, s, label, s2):
                    trace = _make_trace(ts, path_states + [s2], path_labels + [label])
                    return CounterExample(trace, prop.name, len(best_depth))
                key2 = _store_key(ts, sem, s2)
                seen = best_depth.get(key2)
                if seen is not None and seen <= depth + 1:
                    continue
                best_depth[key2] = depth + 1
                _guard_budget(sem, len(best_depth))
                diameter = max(diameter, depth + 1)
                if seen is None and not _state_ok(prop, ts, s2):
                    trace = _make_trace(ts, path_states + [s2], path_labels + [label])
                    return CounterExample(trace, prop.name, len(best_depth))
                path_states.append(s2)
                path_labels.append(label)
                stack.append(iter(_expand(ts, sem, s2, depth + 1, max_depth)))
    except MemoryError:
        raise ExplorationLimitExceeded(len(best_depth), "out of memory") from None

    if cut:
        return DepthExhausted(max_depth, len(best_depth))
    return Verified(len(best_depth), diameter, {"deadlocks": deadlocks})


def _expand(ts, sem, s, depth, max_depth):
    steps = ts.steps(s)
    if depth >= max_depth:
        if steps:
            yield ("cut", None, None)
        return
    if _deadlocked(ts, sem, s, steps):
        yield ("deadlock", None, None)
    for label, s2 in steps:
        yield ("step", label, s2)


def check(ts: TransitionSystem, prop: Property | None, sem: CheckSemantics) -> Verdict:
    if sem.search == "dfs":
        return dfs_check(ts, prop, sem)
    return bfs_check(ts, prop, sem)


@dataclass(frozen=True)
class ReachableStats:
    state_count: int
    diameter: int
    deadlock_count: int


def reachable_stats(ts: TransitionSystem, sem: CheckSemantics = CheckSemantics()) -> ReachableStats:
    """Exhaustive exploration with no property; counts do not depend on search order."""
    plain = CheckSemantics(
        stutter_mode=sem.stutter_mode,
        strict_deadlock=sem.strict_deadlock,
        fingerprint=sem.fingerprint,
        max_states=sem.max_states,
    )
    v = bfs_check(ts, None, plain)
    return ReachableStats(v.states_explored, v.diameter, v.stats["deadlocks"])
