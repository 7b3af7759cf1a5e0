# expect: accept
# transcript: accept_calendar.out
# notes: the running two-calendar example over a fixed week
from labelflow import (Secret, declassify, secret_block, std, unwrap_secret,
                       unwrap_secret_ref, wrap_secret)
from labelflow.demo_lattice import Label_A, Label_B, Label_AB

__secrecy_policies__ = ["a", "b"]

WEEK = ("Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun")


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


def overlapping_days(alice_cal: dict[str, Secret[bool, Label_A]],
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


alice = seal_calendar_a({"Mon": True, "Tue": False, "Wed": True,
                         "Thu": True, "Fri": False, "Sat": False,
                         "Sun": True})
bob = seal_calendar_b({"Mon": True, "Tue": True, "Wed": True,
                       "Thu": False, "Fri": False, "Sat": True,
                       "Sun": False})
print("Overlapping days:", overlapping_days(alice, bob))
