from labelflow import (Secret, declassify, secret_block, std, unwrap_secret,
                       unwrap_secret_ref, wrap_secret)
from labelflow.demo_lattice import Label_A, Label_B, Label_AB

__secrecy_policies__ = ["a", "b"]

alice_cal: dict[str, Secret[bool, Label_A]] = {}
bob_cal: dict[str, Secret[bool, Label_B]] = {}


@secret_block(Label_AB)
def count():
    return wrap_secret(0)


for day, available in alice_cal.items():
    @secret_block(Label_AB)
    def step():
        if unwrap_secret(available) and unwrap_secret_ref(
                std.option.unwrap(std.map.get(bob_cal, day))):
            count += 1

print("Overlapping days:", declassify(count))
