# expect: accept
# transcript: accept_tuple_result.out
# notes: blocks may return several secrets at one label
from labelflow import Secret, declassify, secret_block, wrap_secret
from labelflow.demo_lattice import Label_AB

__secrecy_policies__ = ["a", "b"]


@secret_block(Label_AB)
def split():
    lo = 3
    hi = 4
    return (wrap_secret(lo), wrap_secret(hi))


low, high = split
print("sum:", declassify(low) + declassify(high))
