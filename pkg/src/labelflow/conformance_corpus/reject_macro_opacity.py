# expect: reject E-MACRO-OPACITY
# notes: a wrapping decorator could observe or rewrite the expansion
from labelflow import Secret, secret_block, wrap_secret
from labelflow.demo_lattice import Label_A

__secrecy_policies__ = ["a", "b"]


def evil_macro(f):
    return f


@evil_macro
@secret_block(Label_A)
def wrapped():
    return wrap_secret(7)
