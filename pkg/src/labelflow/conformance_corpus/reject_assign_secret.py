# expect: reject E-ASSIGN-SECRET
# notes: plain assignment must not replace a secret wholesale
from labelflow import Secret, secret_block, wrap_secret
from labelflow.demo_lattice import Label_AB

__secrecy_policies__ = ["a", "b"]


@secret_block(Label_AB)
def counter():
    return wrap_secret(0)


@secret_block(Label_AB)
def clobber():
    counter = wrap_secret(41)
