# expect: reject E-NO-DEFAULT
# notes: panic containment needs a default-valued result
from dataclasses import dataclass

from labelflow import Secret, secret_block, wrap_secret, invisible_side_effect_free
from labelflow.demo_lattice import Label_A

__secrecy_policies__ = ["a", "b"]


@invisible_side_effect_free
@dataclass(frozen=True)
class Reading:
    volts: float
    amps: float


@secret_block(Label_A)
def sample():
    return wrap_secret(Reading(1.5, 0.2))
