# expect: reject E-WRITE-DOWN
# notes: writable access needs the value's label to equal the block label
from labelflow import Secret, secret_block, wrap_secret, unwrap_secret_mut_ref
from labelflow.demo_lattice import Label_A, Label_AB

__secrecy_policies__ = ["a", "b"]


@secret_block(Label_A)
def low():
    return wrap_secret([1, 2, 3])


@secret_block(Label_AB)
def poke():
    cells = unwrap_secret_mut_ref(low)
    cells[0] = 0
