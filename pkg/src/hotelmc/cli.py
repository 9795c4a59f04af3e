"""Command-line entry point: ``hotelmc enumerate | check | sweep``.

Exit codes of ``check``: 0 verified, 1 counter-example (or flagged
deadlock), 2 usage error, 3 depth or length bound exhausted, 4 resource
limit hit.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass, field

from .bounded import bounded_check, bounded_sweep
from .checker import (
    DELTA,
    LABEL_AWARE,
    CheckSemantics,
    CounterExample,
    Deadlock,
    ExplorationLimitExceeded,
    check,
)
from .hybrid import hybrid_check
from .model import HotelConfig, enumerate_initial_states
from .serialize import (
    TEXT_FORMAT_VERSION,
    config_to_json,
    dumps,
    render_trace,
    state_to_json,
    trace_to_json,
)
from .symmetry import canonical_initial_states
from .systems import NO_INTERVENING_MODES, hotel_property, hotel_system

EXIT_CODES = {
    "verified": 0,
    "counterexample": 1,
    "deadlock": 1,
    "depth_exhausted": 3,
    "resource_exhausted": 4,
}

CSV_COLUMNS = [
    "mode", "n", "keys", "rooms", "guests", "exact_scope", "no_intervening",
    "stutter", "t_or_depth", "verdict", "ce_length", "states_explored", "ms",
]


@dataclass
class RunResult:
    kind: str
    verdict: object = None
    states: int = 0
    diameter: int | None = None
    extra: dict = field(default_factory=dict)


def _add_config_args(p: argparse.ArgumentParser):
    p.add_argument("--n", type=int, help="n keys, up to n rooms and guests (n+2 keys with --exact-scope)")
    p.add_argument("--keys", type=int)
    p.add_argument("--rooms", type=int)
    p.add_argument("--guests", type=int)
    p.add_argument("--exact-scope", action="store_true")


def _config_from_args(parser, args) -> HotelConfig:
    if args.n is None and None in (args.keys, args.rooms, args.guests):
        parser.error("give --n or all of --keys/--rooms/--guests")
    if args.n is not None and args.n < 0:
        parser.error("--n must be >= 0")
    base = HotelConfig.uniform(args.n, args.exact_scope) if args.n is not None else None
    keys = args.keys if args.keys is not None else base.key_count
    rooms = args.rooms if args.rooms is not None else len(base.room_universe)
    guests = args.guests if args.guests is not None else len(base.guest_universe)
    if min(keys, rooms, guests) < 0:
        parser.error("sizes must be >= 0")
    return HotelConfig.sized(keys, rooms, guests, args.exact_scope)


def run_mode(
    c: HotelConfig,
    mode: str,
    no_intervening: str = "off",
    stutter: str = LABEL_AWARE,
    deadlock: str = "ignore",
    depth: int = 100,
    trace_len: int = 5,
    sweep: bool = False,
    symmetry: bool = False,
    workers: int = 1,
    max_states: int | None = None,
    fingerprint: bool = False,
    prop_name: str = "NoBadEntry",
) -> RunResult:
    prop = hotel_property(prop_name, c)
    sem = CheckSemantics(
        stutter_mode=stutter,
        deadlock_policy=deadlock,
        search="dfs" if mode == "dfs" else "bfs",
        max_depth=depth if mode == "dfs" else None,
        fingerprint=fingerprint,
        max_states=max_states,
    )
    try:
        if mode in ("bfs", "dfs"):
            v = check(hotel_system(c, no_intervening, symmetry=symmetry), prop, sem)
            return RunResult(v.kind, v, v.states_explored, getattr(v, "diameter", None))
        if mode == "bounded":
            ts = hotel_system(c, "tla" if no_intervening == "tla" else "off")
            alloy = no_intervening == "alloy"
            if sweep:
                rep = bounded_sweep(ts, prop, trace_len, alloy)
                v = rep.verdict
                per_t = [{"t": t, "verdict": pv.kind} for t, pv in rep.per_t]
                return RunResult(v.kind, v, v.states_explored, None, {"per_t": per_t})
            v = bounded_check(ts, prop, trace_len, alloy)
            return RunResult(v.kind, v, v.states_explored, getattr(v, "diameter", None))
        if mode == "hybrid":
            res = hybrid_check(c, prop_name, sem, no_intervening, symmetry, workers)
            tasks = {
                "total": len(res.tasks),
                "violating": res.violating_tasks,
                "ratio": res.violation_ratio,
                "errors": len(res.errors),
            }
            explored = sum(t.states_explored for t in res.tasks)
            if res.verdict is None:
                return RunResult("resource_exhausted", None, explored, None, {"tasks": tasks})
            return RunResult(res.verdict.kind, res.verdict, explored,
                             getattr(res.verdict, "diameter", None), {"tasks": tasks})
    except ExplorationLimitExceeded as exc:
        return RunResult("resource_exhausted", None, exc.states_explored)
    raise ValueError(f"unknown mode {mode!r}")


def _trace_of(verdict):
    if isinstance(verdict, (CounterExample, Deadlock)):
        return verdict.trace
    return None


def cmd_enumerate(parser, args, out) -> int:
    c = _config_from_args(parser, args)
    if args.symmetry:
        states = canonical_initial_states(c)
    else:
        states = list(enumerate_initial_states(c))
    if args.list:
        for s in states:
            out.write(json.dumps(state_to_json(s, c), separators=(",", ":")) + "\n")
    out.write(f"{len(states)}\n")
    return 0


def cmd_check(parser, args, out) -> int:
    c = _config_from_args(parser, args)
    if args.trace_len < 1:
        parser.error("--trace-len must be >= 1")
    if args.depth < 1:
        parser.error("--depth must be >= 1")
    if args.workers < 1:
        parser.error("--workers must be >= 1")
    res = run_mode(
        c, args.mode, args.no_intervening, args.stutter, args.deadlock, args.depth,
        args.trace_len, args.sweep, args.symmetry, args.workers, args.max_states,
        args.fingerprint,
    )
    trace = _trace_of(res.verdict)
    if args.format == "json":
        semantics = {
            "mode": args.mode,
            "no_intervening": args.no_intervening,
            "stutter": args.stutter,
            "deadlock": args.deadlock,
            "depth": args.depth if args.mode == "dfs" else None,
            "trace_len": args.trace_len if args.mode == "bounded" else None,
            "symmetry": args.symmetry,
        }
        stats = {"states": res.states, "diameter": res.diameter, **res.extra}
        doc = {"config": config_to_json(c), "semantics": semantics, "verdict": res.kind, "stats": stats}
        if isinstance(res.verdict, CounterExample):
            doc["property"] = res.verdict.violated_property
        if trace is not None:
            doc["trace"] = trace_to_json(trace, c)
        out.write(dumps(doc))
    else:
        out.write(f"# {TEXT_FORMAT_VERSION}\n")
        out.write(f"verdict: {res.kind}\n")
        if isinstance(res.verdict, CounterExample):
            out.write(f"property: {res.verdict.violated_property}\n")
        out.write(f"states explored: {res.states}\n")
        if "tasks" in res.extra:
            t = res.extra["tasks"]
            out.write(f"tasks: {t['total']} ({t['violating']} violating, ratio {t['ratio']:.4f})\n")
        for row in res.extra.get("per_t", []):
            out.write(f"t={row['t']}: {row['verdict']}\n")
        if trace is not None:
            out.write(f"trace length: {len(trace)}\n")
            out.write(render_trace(trace, c))
    return EXIT_CODES[res.kind]


def parse_int_list(text: str) -> list[int]:
    """``"1..3,5"`` -> ``[1, 2, 3, 5]``; the empty string is the empty list."""
    values: list[int] = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        if ".." in part:
            lo, hi = part.split("..", 1)
            values.extend(range(int(lo), int(hi) + 1))
        else:
            values.append(int(part))
    return values


def _word_list(text: str) -> list[str]:
    return [p.strip() for p in text.split(",") if p.strip()]


def sweep_rows(
    ns, modes, no_intervening, stutters, ts_, depth=100, exact_scope=False, workers=1, symmetry=False,
):
    for n in ns:
        c = HotelConfig.uniform(n, exact_scope)
        for mode in modes:
            for ni in no_intervening:
                for stutter in (stutters if mode != "bounded" else [LABEL_AWARE]):
                    if mode == "bounded":
                        bounds = ts_
                    elif mode == "dfs":
                        bounds = [depth]
                    else:
                        bounds = [-1]
                    for b in bounds:
                        t0 = time.perf_counter()
                        res = run_mode(
                            c, mode, ni, stutter, depth=b if mode == "dfs" else depth,
                            trace_len=b if mode == "bounded" else 1,
                            symmetry=symmetry, workers=workers,
                        )
                        ms = (time.perf_counter() - t0) * 1000
                        trace = _trace_of(res.verdict)
                        yield {
                            "mode": mode,
                            "n": n,
                            "keys": c.key_count,
                            "rooms": len(c.room_universe),
                            "guests": len(c.guest_universe),
                            "exact_scope": int(exact_scope),
                            "no_intervening": ni,
                            "stutter": stutter,
                            "t_or_depth": b,
                            "verdict": res.kind,
                            "ce_length": len(trace) if isinstance(res.verdict, CounterExample) else -1,
                            "states_explored": res.states,
                            "ms": f"{ms:.1f}",
                        }


def cmd_sweep(parser, args, out) -> int:
    try:
        ns = parse_int_list(args.n)
        ts_ = parse_int_list(args.t)
    except ValueError as exc:
        parser.error(str(exc))
    modes = _word_list(args.modes)
    nis = _word_list(args.no_intervening)
    stutters = _word_list(args.stutter)
    for m in modes:
        if m not in ("bfs", "dfs", "bounded", "hybrid"):
            parser.error(f"unknown mode {m!r}")
    for ni in nis:
        if ni not in NO_INTERVENING_MODES:
            parser.error(f"unknown no-intervening mode {ni!r}")
    for st in stutters:
        if st not in (LABEL_AWARE, DELTA):
            parser.error(f"unknown stutter mode {st!r}")
    if any(t < 1 for t in ts_) or any(n < 0 for n in ns):
        parser.error("trace lengths must be >= 1 and n >= 0")
    sink = open(args.output, "w", newline="") if args.output else out
    try:
        writer = csv.DictWriter(sink, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in sweep_rows(ns, modes, nis, stutters, ts_, args.depth, args.exact_scope,
                              args.workers, args.symmetry):
            writer.writerow(row)
    finally:
        if sink is not out:
            sink.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hotelmc", description="Hotel locking model checker")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="count (or list) initial states")
    _add_config_args(p)
    p.add_argument("--symmetry", action="store_true", help="one state per room/guest relabelling orbit")
    p.add_argument("--list", action="store_true", help="print every state as one JSON line")

    p = sub.add_parser("check", help="check NoBadEntry")
    _add_config_args(p)
    p.add_argument("--mode", choices=["bfs", "dfs", "bounded", "hybrid"], default="bfs")
    p.add_argument("--trace-len", type=int, default=5, help="exact trace length (bounded)")
    p.add_argument("--sweep", action="store_true", help="bounded: try every length 1..trace-len")
    p.add_argument("--depth", type=int, default=100, help="dfs depth bound in steps")
    p.add_argument("--no-intervening", choices=list(NO_INTERVENING_MODES), default="off")
    p.add_argument("--stutter", choices=[LABEL_AWARE, DELTA], default=LABEL_AWARE)
    p.add_argument("--deadlock", choices=["ignore", "flag"], default="ignore")
    p.add_argument("--symmetry", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--max-states", type=int, default=None)
    p.add_argument("--fingerprint", action="store_true", help="64-bit fingerprints instead of full states")
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("sweep", help="experiment grid as CSV")
    p.add_argument("--n", default="1..3", help="sizes, e.g. 1..3 or 1,3")
    p.add_argument("--modes", default="bfs")
    p.add_argument("--no-intervening", default="off,tla")
    p.add_argument("--stutter", default=LABEL_AWARE)
    p.add_argument("--t", default="1..7", help="trace lengths for bounded rows")
    p.add_argument("--depth", type=int, default=100)
    p.add_argument("--exact-scope", action="store_true")
    p.add_argument("--symmetry", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", help="CSV file (default stdout)")
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"enumerate": cmd_enumerate, "check": cmd_check, "sweep": cmd_sweep}[args.command]
    return handler(parser, args, out)


if __name__ == "__main__":
    sys.exit(main())
