"""Room/guest relabelling and orbit canonicalization.

Keys are never permuted: their order is what the locks rely on.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Mapping

from .model import ActionLabel, HotelConfig, HotelState, enumerate_initial_states, state_words


def permute_state(s: HotelState, room_map: Mapping[int, int], guest_map: Mapping[int, int]) -> HotelState:
    """Rename rooms and guests of ``s``; maps must be injective on the present ids."""
    rows = sorted(
        (
            (room_map[r], s.keys[i], s.current[i], s.last[i],
             frozenset(guest_map[g] for g in s.occupant[i]))
            for i, r in enumerate(s.rooms)
        ),
        key=lambda row: row[0],
    )
    grows = sorted(((guest_map[g], s.gkeys[j]) for j, g in enumerate(s.guests)), key=lambda row: row[0])
    return HotelState(
        rooms=tuple(row[0] for row in rows),
        guests=tuple(row[0] for row in grows),
        keys=tuple(row[1] for row in rows),
        current=tuple(row[2] for row in rows),
        last=tuple(row[3] for row in rows),
        occupant=tuple(row[4] for row in rows),
        gkeys=tuple(row[1] for row in grows),
    )


def permute_label(label: ActionLabel, room_map: Mapping[int, int], guest_map: Mapping[int, int]) -> ActionLabel:
    room = None if label.room is None else room_map[label.room]
    return ActionLabel(label.action, guest_map[label.guest], room, label.key)


def _distinct_arrangements(classes: list[list[int]]) -> Iterator[list[int]]:
    """Orderings of a multiset given as classes of interchangeable items.

    Yields index sequences into ``classes``; items of one class are never
    reordered among themselves because that cannot change the image.
    """
    counts = [len(c) for c in classes]
    total = sum(counts)
    seq: list[int] = []

    def rec():
        if len(seq) == total:
            yield list(seq)
            return
        for ci, left in enumerate(counts):
            if left:
                counts[ci] -= 1
                seq.append(ci)
                yield from rec()
                seq.pop()
                counts[ci] += 1

    yield from rec()


def _guest_maps(s: HotelState) -> Iterator[dict[int, int]]:
    occupied_by: dict[int, set[int]] = {g: set() for g in s.guests}
    for i, r in enumerate(s.rooms):
        for g in s.occupant[i]:
            occupied_by[g].add(r)
    classes: dict[tuple, list[int]] = {}
    for j, g in enumerate(s.guests):
        sig = (tuple(sorted(s.gkeys[j])), tuple(sorted(occupied_by[g])))
        classes.setdefault(sig, []).append(g)
    groups = list(classes.values())
    for arrangement in _distinct_arrangements(groups):
        cursor = [0] * len(groups)
        gmap = {}
        for new_id, ci in enumerate(arrangement):
            gmap[groups[ci][cursor[ci]]] = new_id
            cursor[ci] += 1
        yield gmap


def canonicalize_with_witness(s: HotelState) -> tuple[HotelState, dict[int, int], dict[int, int]]:
    """Minimal-encoding relabelling of ``s`` together with the maps producing it.

    Present rooms (guests) are always sent onto the smallest ids, so only
    bijections onto ``0..m-1`` need to be tried.
    """
    best = None
    for room_order in itertools.permutations(s.rooms):
        rmap = {r: i for i, r in enumerate(room_order)}
        for gmap in _guest_maps(s):
            image = permute_state(s, rmap, gmap)
            words = state_words(image)
            if best is None or words < best[0]:
                best = (words, image, rmap, gmap)
    return best[1], best[2], best[3]


def canonicalize(s: HotelState) -> HotelState:
    return canonicalize_with_witness(s)[0]


def canonicalize_with_label(s: HotelState, label: ActionLabel | None) -> tuple[HotelState, ActionLabel | None]:
    """Joint canonical form of a state paired with a pending action label."""
    if label is None:
        return canonicalize(s), None
    best = None
    for room_order in itertools.permutations(s.rooms):
        rmap = {r: i for i, r in enumerate(room_order)}
        for gmap in itertools.permutations(s.guests):
            gm = {g: i for i, g in enumerate(gmap)}
            image = permute_state(s, rmap, gm)
            lab = permute_label(label, rmap, gm)
            words = (state_words(image), lab.sort_key())
            if best is None or words < best[0]:
                best = (words, image, lab)
    return best[1], best[2]


def orbit(s: HotelState, c: HotelConfig) -> set[HotelState]:
    """All images of ``s`` under every permutation of the room and guest universes."""
    rooms = range(len(c.room_universe))
    guests = range(len(c.guest_universe))
    images = set()
    for rp in itertools.permutations(rooms):
        for gp in itertools.permutations(guests):
            images.add(permute_state(s, dict(zip(rooms, rp)), dict(zip(guests, gp))))
    return images


def canonical_initial_states(c: HotelConfig) -> list[HotelState]:
    """One canonical representative per orbit of initial states, in encoding order."""
    reps = {canonicalize(s) for s in enumerate_initial_states(c)}
    return sorted(reps, key=state_words)


def count_canonical_initial_states(c: HotelConfig) -> int:
    return len(canonical_initial_states(c))
