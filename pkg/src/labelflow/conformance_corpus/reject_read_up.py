# expect: reject E-READ-UP
# notes: a block labeled {a} may not read an {a,b} secret
from labelflow import Secret, secret_block, wrap_secret, unwrap_secret
from labelflow.demo_lattice import Label_A, Label_AB

__secrecy_policies__ = ["a", "b"]


@secret_block(Label_AB)
def shared():
    return wrap_secret(99)


@secret_block(Label_A)
def leak():
    return wrap_secret(unwrap_secret(shared))
