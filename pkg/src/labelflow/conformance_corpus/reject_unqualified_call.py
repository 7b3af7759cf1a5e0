# expect: reject E-UNVETTED-CALL
# notes: library calls must be fully qualified std.* names
from labelflow import Secret, secret_block, wrap_secret, unwrap_secret_ref
from labelflow.demo_lattice import Label_A

__secrecy_policies__ = ["a", "b"]


@secret_block(Label_A)
def word():
    return wrap_secret("hunter2")


@secret_block(Label_A)
def measure():
    return wrap_secret(len(unwrap_secret_ref(word)))
