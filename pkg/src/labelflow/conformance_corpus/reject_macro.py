# expect: reject E-MACRO-IN-BLOCK
# notes: dynamically constructed code is opaque to the checks
from labelflow import Secret, secret_block, wrap_secret
from labelflow.demo_lattice import Label_A

__secrecy_policies__ = ["a", "b"]


@secret_block(Label_A)
def conjure():
    v = eval("41 + 1")
    return wrap_secret(v)
