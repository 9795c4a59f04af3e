"""Hotel room locking protocol as explicit finite structures.

Rooms and guests are referred to by their index into the configured
universes; keys are the naturals ``0 .. key_count - 1`` and their natural
order is the order the front desk and the locks agree on.  Every map in a
:class:`HotelState` is stored as a tuple aligned with ``rooms`` (or
``guests``), so a state is hashable and its maps are total by construction.
"""

from __future__ import annotations

import itertools
import struct
from dataclasses import dataclass, replace
from typing import Iterator

ENTRY = "Entry"
CHECKIN = "Checkin"
CHECKOUT = "Checkout"

_ACTION_RANK = {ENTRY: 0, CHECKIN: 1, CHECKOUT: 2}

# Encodings pack every integer as an unsigned 16-bit big-endian word.
_MAX_ID = 0xFFFF


@dataclass(frozen=True)
class HotelConfig:
    key_count: int
    room_universe: tuple[str, ...]
    guest_universe: tuple[str, ...]
    exact_scope: bool = False

    def __post_init__(self):
        object.__setattr__(self, "room_universe", tuple(self.room_universe))
        object.__setattr__(self, "guest_universe", tuple(self.guest_universe))
        if self.key_count < 0:
            raise ValueError("key_count must be >= 0")
        for name, universe in (("room", self.room_universe), ("guest", self.guest_universe)):
            if len(set(universe)) != len(universe):
                raise ValueError(f"duplicate {name} identifiers: {universe!r}")
        if max(self.key_count, len(self.room_universe), len(self.guest_universe)) > _MAX_ID:
            raise ValueError("universe too large to encode")

    @classmethod
    def sized(cls, keys: int, rooms: int, guests: int, exact_scope: bool = False) -> HotelConfig:
        return cls(
            key_count=keys,
            room_universe=tuple(f"r{i}" for i in range(rooms)),
            guest_universe=tuple(f"g{i}" for i in range(guests)),
            exact_scope=exact_scope,
        )

    @classmethod
    def uniform(cls, n: int, exact_scope: bool = False) -> HotelConfig:
        """The benchmark family: ``n`` keys and up to ``n`` rooms and guests.

        With ``exact_scope`` there are exactly ``n`` rooms and guests and
        ``n + 2`` keys, the smallest key surplus that admits a bad entry.
        """
        return cls.sized(n + 2 if exact_scope else n, n, n, exact_scope)

    def room_name(self, r: int) -> str:
        return self.room_universe[r]

    def guest_name(self, g: int) -> str:
        return self.guest_universe[g]

    @staticmethod
    def key_name(k: int) -> str:
        return f"k{k}"


@dataclass(frozen=True, slots=True)
class HotelState:
    rooms: tuple[int, ...]
    guests: tuple[int, ...]
    keys: tuple[frozenset[int], ...]
    current: tuple[int, ...]
    last: tuple[int, ...]
    occupant: tuple[frozenset[int], ...]
    gkeys: tuple[frozenset[int], ...]

    def room_index(self, r: int) -> int:
        return self.rooms.index(r)

    def guest_index(self, g: int) -> int:
        return self.guests.index(g)

    def keys_of(self, r: int) -> frozenset[int]:
        return self.keys[self.rooms.index(r)]

    def current_of(self, r: int) -> int:
        return self.current[self.rooms.index(r)]

    def last_of(self, r: int) -> int:
        return self.last[self.rooms.index(r)]

    def occupant_of(self, r: int) -> frozenset[int]:
        return self.occupant[self.rooms.index(r)]

    def gkeys_of(self, g: int) -> frozenset[int]:
        return self.gkeys[self.guests.index(g)]


EMPTY_STATE = HotelState((), (), (), (), (), (), ())


@dataclass(frozen=True, slots=True)
class ActionLabel:
    action: str
    guest: int
    room: int | None = None
    key: int | None = None

    def sort_key(self) -> tuple[int, int, int, int]:
        return (
            _ACTION_RANK[self.action],
            self.guest,
            -1 if self.room is None else self.room,
            -1 if self.key is None else self.key,
        )

    def __lt__(self, other: ActionLabel) -> bool:
        return self.sort_key() < other.sort_key()

    def render(self, c: HotelConfig) -> str:
        g = c.guest_name(self.guest)
        if self.action == CHECKOUT:
            return f"{CHECKOUT}({g})"
        return f"{self.action}({g}, {c.room_name(self.room)}, {c.key_name(self.key)})"


def entry(g: int, r: int, k: int) -> ActionLabel:
    return ActionLabel(ENTRY, g, r, k)


def checkin(g: int, r: int, k: int) -> ActionLabel:
    return ActionLabel(CHECKIN, g, r, k)


def checkout(g: int) -> ActionLabel:
    return ActionLabel(CHECKOUT, g)


def next_key(k: int, pool) -> int | None:
    """Smallest key of ``pool`` strictly greater than ``k``, if any."""
    greater = [x for x in pool if x > k]
    return min(greater) if greater else None


def state_words(s: HotelState) -> tuple[int, ...]:
    """Flat integer image of ``s``; length prefixes make it injective."""
    out = [len(s.rooms), *s.rooms, len(s.guests), *s.guests]
    for i in range(len(s.rooms)):
        out.append(len(s.keys[i]))
        out.extend(sorted(s.keys[i]))
        out.append(s.current[i])
        out.append(s.last[i])
        out.append(len(s.occupant[i]))
        out.extend(sorted(s.occupant[i]))
    for gk in s.gkeys:
        out.append(len(gk))
        out.extend(sorted(gk))
    return tuple(out)


def encode(s: HotelState) -> bytes:
    """Canonical byte encoding; byte order agrees with ``state_words`` order."""
    words = state_words(s)
    return struct.pack(f">{len(words)}H", *words)


def type_inv(s: HotelState, c: HotelConfig) -> bool:
    nr, ng = len(s.rooms), len(s.guests)
    if any(len(t) != nr for t in (s.keys, s.current, s.last, s.occupant)):
        return False
    if len(s.gkeys) != ng:
        return False
    if list(s.rooms) != sorted(set(s.rooms)) or list(s.guests) != sorted(set(s.guests)):
        return False
    if any(not 0 <= r < len(c.room_universe) for r in s.rooms):
        return False
    if any(not 0 <= g < len(c.guest_universe) for g in s.guests):
        return False

    def in_range(k):
        return 0 <= k < c.key_count

    guests = set(s.guests)
    seen: set[int] = set()
    for i in range(nr):
        pool = s.keys[i]
        if not all(in_range(k) for k in pool):
            return False
        if s.current[i] not in pool or not in_range(s.last[i]):
            return False
        if seen & pool:
            return False
        seen |= pool
        if not s.occupant[i] <= guests:
            return False
    return all(in_range(k) for gk in s.gkeys for k in gk)


def _key_assignments(key_count: int, nrooms: int) -> Iterator[tuple[frozenset[int], ...]]:
    # each key goes to one room's pool or to none; every pool must be nonempty
    for owner in itertools.product(range(nrooms + 1), repeat=key_count):
        pools = [set() for _ in range(nrooms)]
        for k, o in enumerate(owner):
            if o < nrooms:
                pools[o].add(k)
        if all(pools):
            yield tuple(frozenset(p) for p in pools)


def _subsets(universe_size: int, exact: bool) -> Iterator[tuple[int, ...]]:
    if exact:
        yield tuple(range(universe_size))
        return
    for size in range(universe_size + 1):
        yield from itertools.combinations(range(universe_size), size)


def enumerate_initial_states(c: HotelConfig) -> Iterator[HotelState]:
    """All states satisfying the initial-state predicate, in encoding order."""
    states = []
    for rooms in _subsets(len(c.room_universe), c.exact_scope):
        pools_and_currents = [
            (pools, cur)
            for pools in _key_assignments(c.key_count, len(rooms))
            for cur in itertools.product(*(sorted(p) for p in pools))
        ]
        for guests in _subsets(len(c.guest_universe), c.exact_scope):
            no_keys = tuple(frozenset() for _ in guests)
            vacant = tuple(frozenset() for _ in rooms)
            for pools, cur in pools_and_currents:
                states.append(HotelState(rooms, guests, pools, cur, cur, vacant, no_keys))
    states.sort(key=state_words)
    return iter(states)


def is_initial(s: HotelState, c: HotelConfig) -> bool:
    if not type_inv(s, c):
        return False
    if c.exact_scope and (
        len(s.rooms) != len(c.room_universe) or len(s.guests) != len(c.guest_universe)
    ):
        return False
    return (
        s.last == s.current
        and not any(s.occupant)
        and not any(s.gkeys)
    )


def _set_at(t: tuple, i: int, value) -> tuple:
    return t[:i] + (value,) + t[i + 1:]


def enabled_steps(s: HotelState, c: HotelConfig) -> list[tuple[ActionLabel, HotelState]]:
    """Every enabled action instance with its unique successor, in label order."""
    steps = []
    nrooms = len(s.rooms)

    # Entry(g, r, k): the lock opens for its current key or the next one in its pool
    accepted = []
    for i in range(nrooms):
        cur = s.current[i]
        nk = next_key(cur, s.keys[i])
        accepted.append((cur,) if nk is None else (cur, nk))
    for j, g in enumerate(s.guests):
        held = s.gkeys[j]
        if not held:
            continue
        for i, r in enumerate(s.rooms):
            for k in accepted[i]:
                if k in held:
                    succ = replace(s, current=_set_at(s.current, i, k))
                    steps.append((entry(g, r, k), succ))

    # Checkin(g, r, k): vacant room, the desk issues the key after the last one
    for j, g in enumerate(s.guests):
        for i, r in enumerate(s.rooms):
            if s.occupant[i]:
                continue
            k = next_key(s.last[i], s.keys[i])
            if k is None:
                continue
            succ = replace(
                s,
                occupant=_set_at(s.occupant, i, frozenset((g,))),
                gkeys=_set_at(s.gkeys, j, s.gkeys[j] | {k}),
                last=_set_at(s.last, i, k),
            )
            steps.append((checkin(g, r, k), succ))

    # Checkout(g): leaves every room; the guest keeps the keys
    for g in s.guests:
        if any(g in occ for occ in s.occupant):
            succ = replace(s, occupant=tuple(occ - {g} for occ in s.occupant))
            steps.append((checkout(g), succ))

    steps.sort(key=lambda step: step[0].sort_key())
    return steps


def apply_label(s: HotelState, label: ActionLabel, c: HotelConfig) -> HotelState | None:
    """Successor of ``s`` under ``label``, or None when the action is disabled."""
    for lab, succ in enabled_steps(s, c):
        if lab == label:
            return succ
    return None


def post_pred(s: HotelState, g: int, r: int, k: int) -> bool:
    """The guest has been checked in with ``k`` but has not yet used it."""
    i = s.room_index(r)
    return (
        s.occupant[i] == frozenset((g,))
        and k in s.gkeys_of(g)
        and s.last[i] == k
        and s.current[i] != k
    )


def pending_entries(s: HotelState) -> list[ActionLabel]:
    """Entry labels owed by checked-in guests (those with ``post_pred`` true)."""
    owed = []
    for i, r in enumerate(s.rooms):
        occ = s.occupant[i]
        if len(occ) != 1:
            continue
        (g,) = occ
        k = s.last[i]
        if s.current[i] != k and k in s.gkeys_of(g):
            owed.append(entry(g, r, k))
    return owed


def no_intervening_tla_ok(s: HotelState, label: ActionLabel, c: HotelConfig) -> bool:
    return all(label == owed for owed in pending_entries(s))


def no_bad_entry_step(s: HotelState, label: ActionLabel, s2: HotelState) -> bool:
    """False exactly when a guest enters an occupied room they do not occupy."""
    if label.action != ENTRY:
        return True
    occ = s.occupant_of(label.room)
    return not occ or label.guest in occ


def checkin_obligation(label: ActionLabel) -> ActionLabel | None:
    """The entry that must immediately follow ``label`` under the look-ahead fix."""
    if label.action == CHECKIN:
        return entry(label.guest, label.room, label.key)
    return None


def validate_trace(states, labels, c: HotelConfig) -> bool:
    """A trace is valid when it starts in an initial state and replays step by step."""
    if not states or len(labels) != len(states) - 1:
        return False
    if not is_initial(states[0], c):
        return False
    return all(
        apply_label(s, lab, c) == s2 for s, lab, s2 in zip(states, labels, states[1:])
    )
