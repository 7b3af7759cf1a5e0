# expect: reject E-MUT-CAPTURE
# notes: implicit flow: branch on a secret, write a captured plain variable
from labelflow import Secret, secret_block, wrap_secret, unwrap_secret
from labelflow.demo_lattice import Label_A

__secrecy_policies__ = ["a", "b"]

observed = 0


@secret_block(Label_A)
def guess():
    return wrap_secret(3)


@secret_block(Label_A)
def tattle():
    if unwrap_secret(guess) > 0:
        observed = 1
