"""Two-phase checking: enumerate initial states, then check each one alone.

Tasks are pure (configuration and one initial state in, verdict out) and
share no visited store, so they can run in any order on any worker.  The
aggregate is computed after every task is done, which keeps the reported
counter-example independent of scheduling.
"""

from __future__ import annotations

from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field
from typing import Iterator

from .checker import (
    CheckSemantics,
    CounterExample,
    DepthExhausted,
    ExplorationLimitExceeded,
    Verdict,
    Verified,
    check,
)
from .model import HotelConfig, HotelState, enumerate_initial_states, state_words
from .symmetry import canonical_initial_states, canonicalize
from .systems import hotel_system, hotel_property


def derive_initial_generator(c: HotelConfig, symmetry: bool = False) -> Iterator[HotelState]:
    """The static projection of the model: its initial states, one per orbit if asked."""
    if symmetry:
        return iter(canonical_initial_states(c))
    return enumerate_initial_states(c)


@dataclass(frozen=True)
class TaskReport:
    index: int
    initial: HotelState
    verdict: Verdict | None
    states_explored: int
    error: str | None = None

    @property
    def status(self) -> str:
        return "error" if self.error else self.verdict.kind


@dataclass
class HybridResult:
    verdict: Verdict | None
    tasks: list[TaskReport] = field(default_factory=list)
    complete: bool = True

    @property
    def violating_tasks(self) -> int:
        return sum(1 for t in self.tasks if t.status == "counterexample")

    @property
    def violation_ratio(self) -> float:
        return self.violating_tasks / len(self.tasks) if self.tasks else 0.0

    @property
    def errors(self) -> list[TaskReport]:
        return [t for t in self.tasks if t.error]


def _run_task(args) -> TaskReport:
    index, c, initial, prop_name, sem, no_intervening = args
    ts = hotel_system(c, no_intervening, initial=[initial])
    try:
        v = check(ts, hotel_property(prop_name, c), sem)
    except ExplorationLimitExceeded as exc:
        return TaskReport(index, initial, None, exc.states_explored, str(exc))
    return TaskReport(index, initial, v, getattr(v, "states_explored", 0))


def _task_order(report: TaskReport) -> tuple:
    return (state_words(canonicalize(report.initial)), state_words(report.initial))


def _aggregate(reports: list[TaskReport]) -> Verdict | None:
    failing = [r for r in reports if isinstance(r.verdict, CounterExample)]
    if failing:
        chosen = min(failing, key=_task_order)
        return chosen.verdict
    if any(r.error for r in reports):
        return None
    explored = sum(r.states_explored for r in reports)
    cut = [r.verdict for r in reports if isinstance(r.verdict, DepthExhausted)]
    if cut:
        return DepthExhausted(cut[0].max_depth, explored)
    diameter = max((r.verdict.diameter for r in reports if isinstance(r.verdict, Verified)), default=0)
    return Verified(explored, diameter, {"tasks": len(reports)})


def hybrid_check(
    c: HotelConfig,
    prop_name: str = "NoBadEntry",
    sem: CheckSemantics = CheckSemantics(),
    no_intervening: str = "off",
    symmetry: bool = False,
    workers: int = 1,
    stop_on_first: bool = False,
) -> HybridResult:
    """Check every initial state as a separate task on ``workers`` processes.

    Per-task resource errors are kept in the report; the aggregate verdict
    is None when such an error leaves the outcome undecided.  With
    ``stop_on_first`` the pool is abandoned at the first counter-example,
    which trades determinism for latency.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    jobs = [
        (i, c, s, prop_name, sem, no_intervening)
        for i, s in enumerate(derive_initial_generator(c, symmetry))
    ]
    reports: list[TaskReport] = []
    complete = True
    if workers == 1:
        for job in jobs:
            rep = _run_task(job)
            reports.append(rep)
            if stop_on_first and isinstance(rep.verdict, CounterExample):
                complete = False
                break
    elif not stop_on_first:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, len(jobs) // (workers * 8))
            reports = list(pool.map(_run_task, jobs, chunksize=chunk))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            pending = {pool.submit(_run_task, job) for job in jobs}
            while pending:
                done, pending = wait(pending, return_when=FIRST_COMPLETED)
                reports.extend(f.result() for f in done)
                if any(isinstance(r.verdict, CounterExample) for r in reports):
                    for f in pending:
                        f.cancel()
                    complete = not pending
                    break
        reports.sort(key=lambda r: r.index)
    return HybridResult(_aggregate(reports), reports, complete)
