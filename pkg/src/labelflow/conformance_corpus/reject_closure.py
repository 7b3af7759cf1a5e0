# expect: reject E-CLOSURE-IN-BLOCK
# notes: closures escape the syntax-directed checks
from labelflow import Secret, secret_block, wrap_secret
from labelflow.demo_lattice import Label_A

__secrecy_policies__ = ["a", "b"]


@secret_block(Label_A)
def build():
    probe = lambda v: v + 1
    return wrap_secret(2)
