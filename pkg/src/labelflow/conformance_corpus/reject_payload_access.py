# expect: reject E-PAYLOAD-ACCESS
# notes: naming the payload slot directly is not part of the interface
from labelflow import Secret, secret_block, wrap_secret
from labelflow.demo_lattice import Label_A

__secrecy_policies__ = ["a", "b"]


@secret_block(Label_A)
def pin():
    return wrap_secret(1234)


stolen = pin._Secret__payload
