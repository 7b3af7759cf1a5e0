# expect: reject E-RETURN-LABEL
# notes: result tuples carry one label; mixing labels is unsupported
from labelflow import Secret, secret_block, wrap_secret
from labelflow.demo_lattice import Label_A, Label_AB

__secrecy_policies__ = ["a", "b"]


@secret_block(Label_A)
def low():
    return wrap_secret(1)


@secret_block(Label_AB)
def mixed():
    return (wrap_secret(2), low)
