# expect: reject E-UNSUPPORTED
# notes: f-strings dispatch hidden formatting calls inside blocks
from labelflow import Secret, secret_block, wrap_secret
from labelflow.demo_lattice import Label_A

__secrecy_policies__ = ["a", "b"]

name: str = "world"


@secret_block(Label_A)
def greet():
    return wrap_secret(f"hello {name}")
