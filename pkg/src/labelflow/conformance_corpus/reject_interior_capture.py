# expect: reject E-INTERIOR-MUT
# notes: capturing a shared-mutable cell would let reads smuggle writes
from labelflow import MutCell, Secret, secret_block, wrap_secret
from labelflow.demo_lattice import Label_A

__secrecy_policies__ = ["a", "b"]

mailbox: MutCell[int] = MutCell(0)


@secret_block(Label_A)
def stash():
    box = mailbox
    return wrap_secret(1)
