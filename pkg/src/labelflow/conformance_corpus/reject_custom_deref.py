# expect: reject E-CUSTOM-DEREF
# notes: attribute hooks make every field read an invisible call
from labelflow import Secret, secret_block, wrap_secret
from labelflow.demo_lattice import Label_A

__secrecy_policies__ = ["a", "b"]


class Spy:
    level: int

    def __getattr__(self, name):
        return 0


agent: Spy = Spy()


@secret_block(Label_A)
def observe():
    return wrap_secret(agent.level)
