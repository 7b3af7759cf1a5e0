# expect: accept
# transcript: accept_panic_contained.out
# notes: a panicking block yields the default-valued secret and continues
from labelflow import Secret, declassify, secret_block, wrap_secret
from labelflow.demo_lattice import Label_A

__secrecy_policies__ = ["a", "b"]

denominator = 0


@secret_block(Label_A)
def risky():
    q = 100 // denominator
    return wrap_secret(q)


print("contained:", declassify(risky))
print("continuing")
