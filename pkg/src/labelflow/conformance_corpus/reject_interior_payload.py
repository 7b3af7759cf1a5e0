# expect: reject E-INTERIOR-MUT
# notes: secret payloads must not be interiorly mutable
from labelflow import MutCell, Secret, secret_block, wrap_secret
from labelflow.demo_lattice import Label_A

__secrecy_policies__ = ["a", "b"]

mailbox: MutCell[int] = MutCell(0)


@secret_block(Label_A)
def seal_cell():
    return wrap_secret(mailbox)
