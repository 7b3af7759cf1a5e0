# expect: reject E-CUSTOM-DROP
# notes: a destructor runs invisibly when a value dies inside the block
from labelflow import Secret, secret_block, wrap_secret
from labelflow.demo_lattice import Label_A

__secrecy_policies__ = ["a", "b"]


class Beacon:
    payload: int

    def __del__(self):
        print("value died")


beacon: Beacon = Beacon()


@secret_block(Label_A)
def hide():
    b = beacon
    return wrap_secret(0)
