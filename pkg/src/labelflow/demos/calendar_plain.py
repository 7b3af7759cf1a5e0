"""Unlabeled twin of the calendar demo; the behavior-preservation oracle."""

from __future__ import annotations

import random

WEEK = ("Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun")


def random_week(rng: random.Random) -> dict[str, bool]:
    return {day: rng.random() < 0.5 for day in WEEK}


def calendar_overlap(alice_cal: dict[str, bool],
                     bob_cal: dict[str, bool]) -> int:
    count = 0
    for day, available in alice_cal.items():
        if available and bob_cal[day]:
            count += 1
    return count


def overlap_for_seed(seed: int) -> int:
    rng = random.Random(seed)
    alice = random_week(rng)
    bob = random_week(rng)
    return calendar_overlap(alice, bob)


def main(seed: int) -> None:
    print("Overlapping days:", overlap_for_seed(seed))
