# expect: reject E-WRITE-DOWN
# notes: unwrap_secret_ref yields read-only access; writes need mut_ref
from labelflow import Secret, secret_block, wrap_secret, unwrap_secret_ref
from labelflow.demo_lattice import Label_A, Label_AB

__secrecy_policies__ = ["a", "b"]


@secret_block(Label_A)
def board():
    return wrap_secret([0, 0, 0])


@secret_block(Label_AB)
def scribble():
    cells = unwrap_secret_ref(board)
    cells[1] = 9
