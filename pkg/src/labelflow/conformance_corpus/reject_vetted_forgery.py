# expect: reject E-VETTED-FORGERY
# notes: hand-rolled vetted returns must not type-check
from labelflow import Secret, Vetted
from labelflow.demo_lattice import Label_A

__secrecy_policies__ = ["a", "b"]


def counterfeit(n: int) -> int:
    return Vetted(n)
