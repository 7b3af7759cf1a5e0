# expect: reject E-UNVETTED-CALL
# notes: the canonical leak attempt: print a secret from inside a block
from labelflow import Secret, secret_block, wrap_secret, unwrap_secret
from labelflow.demo_lattice import Label_A

__secrecy_policies__ = ["a", "b"]


@secret_block(Label_A)
def pin():
    return wrap_secret(1234)


@secret_block(Label_A)
def shout():
    print(unwrap_secret(pin))
