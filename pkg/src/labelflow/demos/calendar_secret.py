"""Two-calendar overlap with labeled availability values.

Alice's and Bob's availability booleans are secrets at labels {a} and {b};
the overlap count is accumulated inside {a,b} blocks and released through
a single declassify call at the end.
"""

from __future__ import annotations

import random

from labelflow import (Secret, declassify, secret_block, std, unwrap_secret,
                       unwrap_secret_ref, wrap_secret)
from labelflow.demo_lattice import Label_A, Label_B, Label_AB

__secrecy_policies__ = ["a", "b"]

WEEK = ("Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun")


def random_week(rng: random.Random) -> dict[str, bool]:
    return {day: rng.random() < 0.5 for day in WEEK}


def seal_calendar_a(avail: dict[str, bool]) -> dict[str, Secret[bool, Label_A]]:
    sealed: dict[str, Secret[bool, Label_A]] = {}
    for day in avail:
        flag = avail[day]

        @secret_block(Label_A)
        def value():
            return wrap_secret(flag)

        sealed[day] = value
    return sealed


def seal_calendar_b(avail: dict[str, bool]) -> dict[str, Secret[bool, Label_B]]:
    sealed: dict[str, Secret[bool, Label_B]] = {}
    for day in avail:
        flag = avail[day]

        @secret_block(Label_B)
        def value():
            return wrap_secret(flag)

        sealed[day] = value
    return sealed


def calendar_overlap(alice_cal: dict[str, Secret[bool, Label_A]],
                     bob_cal: dict[str, Secret[bool, Label_B]]) -> int:
    @secret_block(Label_AB)
    def count():
        return wrap_secret(0)

    for day, available in alice_cal.items():
        @secret_block(Label_AB)
        def step():
            if unwrap_secret(available) and unwrap_secret_ref(
                    std.option.unwrap(std.map.get(bob_cal, day))):
                count += 1

    return declassify(count)


def overlap_for_seed(seed: int) -> int:
    rng = random.Random(seed)
    alice = seal_calendar_a(random_week(rng))
    bob = seal_calendar_b(random_week(rng))
    return calendar_overlap(alice, bob)


def main(seed: int) -> None:
    print("Overlapping days:", overlap_for_seed(seed))
