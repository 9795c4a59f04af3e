"""Hotel transition systems for the checker, one per NoIntervening reading.

``off``    plain action system.
``tla``    the post-condition filter conjoined into the next-state relation
           (with TypeInv), so a checked-in guest must enter next.
``alloy``  the look-ahead fact: a Checkin must be followed by its matching
           Entry.  States carry the pending obligation so a forward search
           can enforce it.
"""

from __future__ import annotations

from functools import partial
from typing import Iterable, NamedTuple

from . import model
from .checker import Property, TransitionSystem
from .model import ActionLabel, HotelConfig, HotelState
from .symmetry import canonicalize, canonicalize_with_label

NO_INTERVENING_MODES = ("off", "alloy", "tla")


class Obliged(NamedTuple):
    state: HotelState
    pending: ActionLabel | None


def _plain_successors(c: HotelConfig, s: HotelState):
    return model.enabled_steps(s, c)


def _tla_filter(c: HotelConfig, s: HotelState, label: ActionLabel, s2: HotelState) -> bool:
    return model.no_intervening_tla_ok(s, label, c) and model.type_inv(s2, c)


def _obliged_successors(c: HotelConfig, s: Obliged):
    out = []
    for label, s2 in model.enabled_steps(s.state, c):
        if s.pending is not None and label != s.pending:
            continue
        out.append((label, Obliged(s2, model.checkin_obligation(label))))
    return out


def _obliged_encode(s: Obliged) -> bytes:
    tail = b"" if s.pending is None else repr(s.pending.sort_key()).encode()
    return model.encode(s.state) + b"|" + tail


def _obliged_canonicalize(s: Obliged) -> Obliged:
    return Obliged(*canonicalize_with_label(s.state, s.pending))


def _obliged_view(s: Obliged) -> HotelState:
    return s.state


def _listed(states: tuple) -> Iterable:
    return iter(states)


def _wrap_obliged(inits) -> Iterable[Obliged]:
    return (Obliged(s, None) for s in inits())


def hotel_system(
    c: HotelConfig,
    no_intervening: str = "off",
    initial: Iterable[HotelState] | None = None,
    symmetry: bool = False,
) -> TransitionSystem:
    """Build the transition system for ``c``.

    ``initial`` fixes the initial states (the hybrid pipeline passes one);
    by default every state satisfying Init is initial.
    """
    if no_intervening not in NO_INTERVENING_MODES:
        raise ValueError(f"no_intervening must be one of {NO_INTERVENING_MODES}")
    if initial is None:
        inits = partial(model.enumerate_initial_states, c)
    else:
        inits = partial(_listed, tuple(initial))

    if no_intervening == "alloy":
        return TransitionSystem(
            initial_states=partial(_wrap_obliged, inits),
            successors=partial(_obliged_successors, c),
            encode=_obliged_encode,
            canonicalize=_obliged_canonicalize if symmetry else None,
            view=_obliged_view,
        )
    return TransitionSystem(
        initial_states=inits,
        successors=partial(_plain_successors, c),
        encode=model.encode,
        step_filter=partial(_tla_filter, c) if no_intervening == "tla" else None,
        canonicalize=canonicalize if symmetry else None,
    )


NO_BAD_ENTRY = Property("NoBadEntry", step=model.no_bad_entry_step)


def _type_inv_state(c: HotelConfig, s: HotelState) -> bool:
    return model.type_inv(s, c)


def hotel_property(name: str, c: HotelConfig) -> Property:
    if name == "NoBadEntry":
        return NO_BAD_ENTRY
    if name == "TypeInv":
        return Property("TypeInv", state=partial(_type_inv_state, c))
    raise ValueError(f"unknown property {name!r}")
