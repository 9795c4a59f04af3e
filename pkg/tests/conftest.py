import itertools

import pytest

from hotelmc import model
from hotelmc.model import HotelConfig, HotelState, checkin, checkout, entry


def closure(c, initial=None, keep=None):
    """Plain set-based reachability, independent of the checker's stores."""
    todo = list(model.enumerate_initial_states(c) if initial is None else initial)
    seen = set(todo)
    while todo:
        s = todo.pop()
        for label, s2 in model.enabled_steps(s, c):
            if keep is not None and not keep(s, label, s2):
                continue
            if s2 not in seen:
                seen.add(s2)
                todo.append(s2)
    return seen


def all_typed_states(c):
    """Every state satisfying TypeInv for a (small) configuration."""
    K = range(c.key_count)
    subsets_of = lambda items: [
        frozenset(x) for n in range(len(items) + 1) for x in itertools.combinations(items, n)
    ]
    key_sets = subsets_of(list(K))
    for nr in range(len(c.room_universe) + 1):
        for rooms in itertools.combinations(range(len(c.room_universe)), nr):
            for ng in range(len(c.guest_universe) + 1):
                for guests in itertools.combinations(range(len(c.guest_universe)), ng):
                    guest_sets = subsets_of(list(guests))
                    for pools in itertools.product(key_sets, repeat=nr):
                        for cur in itertools.product(K, repeat=nr):
                            for last in itertools.product(K, repeat=nr):
                                for occ in itertools.product(guest_sets, repeat=nr):
                                    for gk in itertools.product(key_sets, repeat=ng):
                                        s = HotelState(rooms, guests, pools, cur, last, occ, gk)
                                        if model.type_inv(s, c):
                                            yield s


def replay_labels(c, start, labels):
    s = start
    for lab in labels:
        s = model.apply_label(s, lab, c)
        assert s is not None, lab
    return s


@pytest.fixture(scope="session")
def cfg3():
    return HotelConfig.uniform(3)


@pytest.fixture(scope="session")
def reach3(cfg3):
    return closure(cfg3)


@pytest.fixture(scope="session")
def one_room_start():
    """One room with pool {0,1,2}, current = last = 0, guests g0 and g1."""
    return HotelState(
        rooms=(0,),
        guests=(0, 1),
        keys=(frozenset({0, 1, 2}),),
        current=(0,),
        last=(0,),
        occupant=(frozenset(),),
        gkeys=(frozenset(), frozenset()),
    )


@pytest.fixture(scope="session")
def fig2_prefix(cfg3, one_room_start):
    """g0 checks in with k1 and out again, then g1 checks in with k2."""
    return replay_labels(cfg3, one_room_start, [checkin(0, 0, 1), checkout(0), checkin(1, 0, 2)])


@pytest.fixture(scope="session")
def stale_reentry_state(cfg3, one_room_start):
    """g0 holds the lock's current key while g1 occupies the room."""
    return replay_labels(
        cfg3, one_room_start, [checkin(0, 0, 1), entry(0, 0, 1), checkout(0), checkin(1, 0, 2)]
    )
