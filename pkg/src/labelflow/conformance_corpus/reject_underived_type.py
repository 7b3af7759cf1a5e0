# expect: reject E-ISEF
# notes: clean-looking application types still need the explicit derivation
from labelflow import Secret, secret_block, wrap_secret
from labelflow.demo_lattice import Label_A

__secrecy_policies__ = ["a", "b"]


class Plain:
    n: int


item: Plain = Plain()


@secret_block(Label_A)
def hold():
    return wrap_secret(item.n)
