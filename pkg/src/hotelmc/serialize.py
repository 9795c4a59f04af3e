"""JSON and text renderings of configurations, traces and verdicts.

JSON documents are emitted with a fixed key order and indentation, so a
parsed-and-reserialized document is byte-identical to the original.
"""

from __future__ import annotations

import json
from typing import Any

from .checker import Trace
from .model import CHECKOUT, ActionLabel, HotelConfig, HotelState

TEXT_FORMAT_VERSION = "hotel-trace v1"


def config_to_json(c: HotelConfig) -> dict:
    return {
        "keys": c.key_count,
        "rooms": list(c.room_universe),
        "guests": list(c.guest_universe),
        "exact_scope": c.exact_scope,
    }


def config_from_json(d: dict) -> HotelConfig:
    return HotelConfig(d["keys"], tuple(d["rooms"]), tuple(d["guests"]), bool(d["exact_scope"]))


def state_to_json(s: HotelState, c: HotelConfig) -> dict:
    rn = [c.room_name(r) for r in s.rooms]
    gn = [c.guest_name(g) for g in s.guests]
    return {
        "Room": rn,
        "Guest": gn,
        "keys": {r: sorted(ks) for r, ks in zip(rn, s.keys)},
        "current": dict(zip(rn, s.current)),
        "last": dict(zip(rn, s.last)),
        "occupant": {r: [c.guest_name(g) for g in sorted(occ)] for r, occ in zip(rn, s.occupant)},
        "gkeys": {g: sorted(ks) for g, ks in zip(gn, s.gkeys)},
    }


def state_from_json(d: dict, c: HotelConfig) -> HotelState:
    room_id = {name: i for i, name in enumerate(c.room_universe)}
    guest_id = {name: i for i, name in enumerate(c.guest_universe)}
    rooms = sorted(room_id[r] for r in d["Room"])
    guests = sorted(guest_id[g] for g in d["Guest"])
    rn = [c.room_name(r) for r in rooms]
    gn = [c.guest_name(g) for g in guests]
    return HotelState(
        rooms=tuple(rooms),
        guests=tuple(guests),
        keys=tuple(frozenset(d["keys"][r]) for r in rn),
        current=tuple(d["current"][r] for r in rn),
        last=tuple(d["last"][r] for r in rn),
        occupant=tuple(frozenset(guest_id[g] for g in d["occupant"][r]) for r in rn),
        gkeys=tuple(frozenset(d["gkeys"][g]) for g in gn),
    )


def label_to_json(label: ActionLabel, c: HotelConfig) -> dict:
    out: dict[str, Any] = {"action": label.action, "guest": c.guest_name(label.guest)}
    if label.action != CHECKOUT:
        out["room"] = c.room_name(label.room)
        out["key"] = label.key
    return out


def label_from_json(d: dict, c: HotelConfig) -> ActionLabel:
    g = c.guest_universe.index(d["guest"])
    if d["action"] == CHECKOUT:
        return ActionLabel(CHECKOUT, g)
    return ActionLabel(d["action"], g, c.room_universe.index(d["room"]), d["key"])


def trace_to_json(trace: Trace, c: HotelConfig) -> dict:
    return {
        "states": [state_to_json(s, c) for s in trace.states],
        "labels": [label_to_json(lab, c) for lab in trace.labels],
    }


def trace_from_json(d: dict, c: HotelConfig) -> Trace:
    return Trace(
        tuple(state_from_json(s, c) for s in d["states"]),
        tuple(label_from_json(lab, c) for lab in d["labels"]),
    )


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _braces(items) -> str:
    return "{" + ", ".join(items) + "}"


def render_state(s: HotelState, c: HotelConfig) -> list[str]:
    kn = c.key_name
    rn = [c.room_name(r) for r in s.rooms]
    gn = [c.guest_name(g) for g in s.guests]
    return [
        f"Room     = {_braces(rn)}",
        f"Guest    = {_braces(gn)}",
        "keys     = " + _braces(f"{r} -> {_braces(kn(k) for k in sorted(ks))}" for r, ks in zip(rn, s.keys)),
        "current  = " + _braces(f"{r} -> {kn(k)}" for r, k in zip(rn, s.current)),
        "last     = " + _braces(f"{r} -> {kn(k)}" for r, k in zip(rn, s.last)),
        "occupant = " + _braces(
            f"{r} -> {_braces(c.guest_name(g) for g in sorted(occ))}" for r, occ in zip(rn, s.occupant)
        ),
        "gkeys    = " + _braces(f"{g} -> {_braces(kn(k) for k in sorted(ks))}" for g, ks in zip(gn, s.gkeys)),
    ]


def render_trace(trace: Trace, c: HotelConfig) -> str:
    """One block per instant, with the action that links consecutive instants."""
    lines = []
    for i, s in enumerate(trace.states):
        lines.append(f"--- instant {i} ---")
        lines.extend(render_state(s, c))
        if i < len(trace.labels):
            lines.append(f"  == {trace.labels[i].render(c)} ==>")
    return "\n".join(lines) + "\n"
