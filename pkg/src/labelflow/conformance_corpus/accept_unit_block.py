# expect: accept
# transcript: accept_unit_block.out
# notes: a block with no result still runs for its secret writes
from labelflow import Secret, declassify, secret_block, wrap_secret
from labelflow.demo_lattice import Label_A

__secrecy_policies__ = ["a", "b"]


@secret_block(Label_A)
def tally():
    return wrap_secret(10)


@secret_block(Label_A)
def bump():
    tally += 5


print("tally:", declassify(tally))
