# expect: reject E-RESERVED-NAME
# notes: generated-name prefixes are off limits to application code
from labelflow import Secret, secret_block, wrap_secret
from labelflow.demo_lattice import Label_A

__secrecy_policies__ = ["a", "b"]

_lf_shadow = 3


@secret_block(Label_A)
def hold():
    return wrap_secret(1)
