# expect: reject E-OPERATOR-OVERLOAD
# notes: overloadable operators work on built-in types only
from dataclasses import dataclass

from labelflow import Secret, secret_block, wrap_secret, invisible_side_effect_free
from labelflow.demo_lattice import Label_A

__secrecy_policies__ = ["a", "b"]


@invisible_side_effect_free
@dataclass(frozen=True)
class Money:
    cents: int = 0

    def __add__(self, other):
        return Money(self.cents + other.cents)


price: Money = Money(120)


@secret_block(Label_A)
def total():
    t = price + price
    return wrap_secret(t.cents)
