"""Exit criteria.  Each test prints one PASS/FAIL line (visible without -s)."""

import itertools
import time

import pytest

from hotelmc import model
from hotelmc.bounded import bounded_sweep
from hotelmc.checker import DELTA, CheckSemantics, CounterExample, Verified, bfs_check
from hotelmc.hybrid import hybrid_check
from hotelmc.model import CHECKIN, CHECKOUT, ENTRY, HotelConfig, entry, enumerate_initial_states
from hotelmc.serialize import dumps, trace_to_json
from hotelmc.symmetry import canonical_initial_states, orbit, permute_label, permute_state
from hotelmc.systems import NO_BAD_ENTRY, hotel_system

from conftest import closure


@pytest.fixture
def report(capsys):
    def emit(number, title, checks, detail=""):
        ok = all(checks.values())
        failed = [name for name, passed in checks.items() if not passed]
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
        if detail:
            line += f" ({detail})"
        if failed:
            line += f" failed: {', '.join(failed)}"
        with capsys.disabled():
            print("\n" + line)
        assert ok, line

    return emit


def test_c1_initial_state_counts(report):
    checks, timings = {}, {}
    for n, expected in ((3, 776), (4, 18960)):
        t0 = time.perf_counter()
        count = sum(1 for _ in enumerate_initial_states(HotelConfig.uniform(n)))
        timings[n] = time.perf_counter() - t0
        checks[f"n={n} count {count} == {expected}"] = count == expected
        checks[f"n={n} under 10 s"] = timings[n] < 10.0
    report(1, "initial-state counts 776 / 18960", checks,
           f"{timings[3]:.3f}s, {timings[4]:.3f}s")


def test_c2_symmetry_reduction(report):
    c = HotelConfig.uniform(4)
    initial = set(enumerate_initial_states(c))
    reps = canonical_initial_states(c)
    covered: set = set()
    sizes = []
    disjoint = True
    for rep in reps:
        orb = orbit(rep, c)
        disjoint &= not (orb & covered)
        covered |= orb
        sizes.append(len(orb))
    checks = {
        "orbit sizes sum to 18960": sum(sizes) == len(initial) == 18960,
        "orbits are disjoint": disjoint,
        "orbits cover exactly the initial states": covered == initial,
    }
    relation = "matches" if len(reps) == 520 else "differs from"
    report(2, "symmetry reduction", checks, f"{len(reps)} orbits, {relation} the expected 520")


def test_c3_minimal_counterexample(report, cfg3):
    v = bfs_check(hotel_system(cfg3), NO_BAD_ENTRY, CheckSemantics())
    labels = v.trace.labels if isinstance(v, CounterExample) else ()
    rooms = {lab.room for lab in labels if lab.room is not None}
    guests = {lab.guest for lab in labels}
    sweep = bounded_sweep(hotel_system(cfg3), NO_BAD_ENTRY, 30)
    per_t = [v2.kind for _, v2 in sweep.per_t]
    checks = {
        "BFS counter-example": isinstance(v, CounterExample),
        "exactly 5 states": isinstance(v, CounterExample) and len(v.trace) == 5,
        "Checkin/Checkout/Checkin/Entry": [lab.action for lab in labels] == [CHECKIN, CHECKOUT, CHECKIN, ENTRY],
        "one room": len(rooms) == 1,
        "two distinct guests": len(guests) == 2,
        "trace replays": isinstance(v, CounterExample) and model.validate_trace(v.trace.states, labels, cfg3),
        "bounded t=1..4 verified, t=5 violated": per_t == ["verified"] * 4 + ["counterexample"],
    }
    report(3, "minimal counter-example length 5", checks,
           " ".join(lab.render(cfg3) for lab in labels))


def test_c4_fix_verified(report, cfg3):
    t0 = time.perf_counter()
    sweep = bounded_sweep(hotel_system(cfg3), NO_BAD_ENTRY, 30, alloy_no_intervening=True)
    bfs = bfs_check(hotel_system(cfg3, "tla"), NO_BAD_ENTRY, CheckSemantics())
    elapsed = time.perf_counter() - t0
    checks = {
        "bounded look-ahead fix verified for t=1..30": isinstance(sweep.verdict, Verified)
        and len(sweep.per_t) == 30,
        "BFS with post-condition fix verified": isinstance(bfs, Verified),
        "BFS explored the whole reachable set": isinstance(bfs, Verified) and bfs.states_explored == 2180,
        "under 60 s": elapsed < 60.0,
    }
    report(4, "NoIntervening removes every counter-example", checks, f"{elapsed:.2f}s")


def test_c5_stuttering_divergence(report, cfg3, stale_reentry_state):
    s = stale_reentry_state
    step = dict(model.enabled_steps(s, cfg3))
    ts = hotel_system(cfg3, initial=[s])
    label_aware = bfs_check(ts, NO_BAD_ENTRY, CheckSemantics())
    delta = bfs_check(ts, NO_BAD_ENTRY, CheckSemantics(stutter_mode=DELTA))
    delta_n3 = bfs_check(hotel_system(cfg3), NO_BAD_ENTRY, CheckSemantics(stutter_mode=DELTA))
    checks = {
        "constructed Entry leaves the state unchanged": step.get(entry(0, 0, 1)) == s,
        "step violates NoBadEntry": not model.no_bad_entry_step(s, entry(0, 0, 1), s),
        "label-aware flags it": isinstance(label_aware, CounterExample)
        and label_aware.trace.labels == (entry(0, 0, 1),),
        "delta mode skips it": isinstance(delta, Verified),
        "delta mode still finds an n=3 counter-example": isinstance(delta_n3, CounterExample),
    }
    report(5, "stuttering-semantics divergence", checks)


def test_c6_cross_checker_equivalence(report):
    mismatches = []
    runs = 0
    for k, r, g in itertools.product(range(4), repeat=3):
        for exact in (False, True):
            c = HotelConfig.sized(k, r, g, exact)
            for fix in ("off", "alloy", "tla"):
                sweep = bounded_sweep(hotel_system(c, "tla" if fix == "tla" else "off"),
                                      NO_BAD_ENTRY, 7, fix == "alloy")
                bfs = bfs_check(hotel_system(c, fix), NO_BAD_ENTRY, CheckSemantics(max_depth=6))
                a = len(sweep.verdict.trace) if isinstance(sweep.verdict, CounterExample) else None
                b = len(bfs.trace) if isinstance(bfs, CounterExample) else None
                runs += 1
                if a != b:
                    mismatches.append((c, fix, a, b))
    report(6, "bounded sweep == depth-6 BFS", {"no mismatches": not mismatches},
           f"{runs} configurations, {len(mismatches)} mismatches")


def _aggregate_bytes(res, c):
    doc = {
        "verdict": res.verdict.kind,
        "tasks": [[t.index, t.status, t.states_explored] for t in res.tasks],
    }
    if isinstance(res.verdict, CounterExample):
        doc["trace"] = trace_to_json(res.verdict.trace, c)
    return dumps(doc).encode()


def test_c7_hybrid_soundness(report):
    checks = {}
    for n in range(4):
        c = HotelConfig.uniform(n)
        for fix in ("off", "alloy", "tla"):
            mono = bfs_check(hotel_system(c, fix), NO_BAD_ENTRY)
            outputs = {}
            for workers in (1, 4):
                res = hybrid_check(c, no_intervening=fix, workers=workers)
                checks[f"n={n} {fix} w={workers} kind"] = res.verdict.kind == mono.kind
                outputs[workers] = _aggregate_bytes(res, c)
            checks[f"n={n} {fix} identical output"] = outputs[1] == outputs[4]
    report(7, "hybrid verdicts match monolithic BFS", checks, f"{len(checks)} checks")


def test_c8_model_invariants(report):
    failures = []
    states_checked = 0
    for k in range(4):
        c = HotelConfig.sized(k, 3, 3)
        perms = [(dict(enumerate(rp)), dict(enumerate(gp)))
                 for rp in itertools.permutations(range(3)) for gp in itertools.permutations(range(3))]
        for s in closure(c):
            states_checked += 1
            steps = model.enabled_steps(s, c)
            for lab, s2 in steps:
                if not model.type_inv(s2, c):
                    failures.append(("TypeInv", s, lab))
                framed = {ENTRY: ("last", "occupant", "gkeys"), CHECKOUT: ("current", "last", "gkeys"),
                          CHECKIN: ("current",)}[lab.action]
                static = ("rooms", "guests", "keys")
                if any(getattr(s, f) != getattr(s2, f) for f in framed + static):
                    failures.append(("frame", s, lab))
                if any(not a <= b for a, b in zip(s.gkeys, s2.gkeys)):
                    failures.append(("gkeys", s, lab))
                if lab.action == CHECKIN and not s2.last_of(lab.room) > s.last_of(lab.room):
                    failures.append(("last", s, lab))
            base = set(steps)
            for rmap, gmap in perms:
                image = permute_state(s, rmap, gmap)
                expected = {(permute_label(lab, rmap, gmap), permute_state(s2, rmap, gmap)) for lab, s2 in base}
                if set(model.enabled_steps(image, c)) != expected:
                    failures.append(("equivariance", s, rmap, gmap))
    report(8, "model invariants over reachable states, keys <= 3",
           {"no invariant failures": not failures}, f"{states_checked} states")
