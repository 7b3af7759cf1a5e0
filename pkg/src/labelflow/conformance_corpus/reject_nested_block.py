# expect: reject E-NESTED-BLOCK
# notes: blocks do not nest
from labelflow import Secret, secret_block, wrap_secret
from labelflow.demo_lattice import Label_A, Label_AB

__secrecy_policies__ = ["a", "b"]


@secret_block(Label_AB)
def outer():
    @secret_block(Label_A)
    def inner():
        return wrap_secret(0)
    return wrap_secret(1)
