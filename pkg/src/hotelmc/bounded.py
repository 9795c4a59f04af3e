"""Exact-length trace search, the bounded (Analyzer-style) regime.

A check at length ``t`` asks for a trace of exactly ``t`` states in which
every consecutive pair is a produced step; there is no implicit stuttering,
so a violation inside a trace that cannot be extended to ``t`` states is not
a counter-example at ``t``.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Callable

from .checker import CounterExample, Property, Trace, TransitionSystem, Verdict, Verified
from .model import checkin_obligation


@dataclass
class SweepReport:
    verdict: Verdict
    per_t: list[tuple[int, Verdict]] = field(default_factory=list)


def bounded_check(
    ts: TransitionSystem,
    prop: Property,
    t: int,
    alloy_no_intervening: bool = False,
    obligation: Callable = checkin_obligation,
) -> Verdict:
    """Search every trace of exactly ``t`` states for a violation of ``prop``.

    With ``alloy_no_intervening`` a step labelled by an action with an
    obligation must be followed by the obliged step, unless it is the last
    step of the trace.  Returns the lexicographically first counter-example
    (initial states in enumeration order, labels in label order).
    """
    if t < 1:
        raise ValueError("trace length must be >= 1")
    failed: set = set()
    frames = 0
    pruned = 0

    def step_bad(s, label, s2) -> bool:
        v1, v2 = ts.project(s), ts.project(s2)
        if prop.step is not None and not prop.step(v1, label, v2):
            return True
        return prop.state is not None and not prop.state(v2)

    def extend(s, pending, violated: bool, remaining: int):
        nonlocal frames, pruned
        if remaining == 0:
            return [] if violated else None
        memo_key = (ts.encode(s), pending, violated, remaining)
        if memo_key in failed:
            pruned += 1
            return None
        frames += 1
        for label, s2 in ts.steps(s):
            if pending is not None and label != pending:
                continue
            bad = violated or step_bad(s, label, s2)
            owed = obligation(label) if alloy_no_intervening else None
            rest = extend(s2, owed, bad, remaining - 1)
            if rest is not None:
                return [(label, s2)] + rest
        failed.add(memo_key)
        return None

    limit = sys.getrecursionlimit()
    if t + 100 > limit:
        sys.setrecursionlimit(t + 100)
    try:
        for s0 in ts.initial_states():
            violated = prop.state is not None and not prop.state(ts.project(s0))
            path = extend(s0, None, violated, t - 1)
            if path is not None:
                states = (ts.project(s0),) + tuple(ts.project(s) for _, s in path)
                labels = tuple(lab for lab, _ in path)
                return CounterExample(Trace(states, labels), prop.name, frames)
    finally:
        sys.setrecursionlimit(limit)
    return Verified(frames, t - 1, {"pruned": pruned, "failed_frames": len(failed)})


def bounded_sweep(
    ts: TransitionSystem,
    prop: Property,
    t_max: int,
    alloy_no_intervening: bool = False,
    obligation: Callable = checkin_obligation,
) -> SweepReport:
    """Check lengths ``1..t_max`` in turn, stopping at the first counter-example."""
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    report = SweepReport(verdict=None)
    for t in range(1, t_max + 1):
        v = bounded_check(ts, prop, t, alloy_no_intervening, obligation)
        report.per_t.append((t, v))
        report.verdict = v
        if isinstance(v, CounterExample):
            break
    return report
