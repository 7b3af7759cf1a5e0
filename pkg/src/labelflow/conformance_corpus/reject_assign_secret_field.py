# expect: reject E-ASSIGN-SECRET
# notes: targets containing secrets are rejected by the assignment guard
from dataclasses import dataclass
from typing import Generic, TypeVar

from labelflow import Secret, secret_block, wrap_secret, invisible_side_effect_free
from labelflow.demo_lattice import Label_AB

__secrecy_policies__ = ["a", "b"]

L = TypeVar("L")


@invisible_side_effect_free
@dataclass
class Locker(Generic[L]):
    inner: Secret[int, L] = None
    tag: int = 0


@secret_block(Label_AB)
def swap():
    box = Locker(wrap_secret(1), 0)
    box.inner = wrap_secret(2)
