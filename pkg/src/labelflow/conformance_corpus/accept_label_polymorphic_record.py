# expect: accept
# transcript: accept_label_polymorphic_record.out
# notes: one record type serves both labels via a label parameter
from dataclasses import dataclass
from typing import Generic, TypeVar

from labelflow import (Secret, declassify, invisible_side_effect_free,
                       secret_block, unwrap_secret, wrap_secret)
from labelflow.demo_lattice import Label_A, Label_B

__secrecy_policies__ = ["a", "b"]

L = TypeVar("L")


@invisible_side_effect_free
@dataclass
class Vault(Generic[L]):
    inner: Secret[int, L] = None
    owner: str = ""


@secret_block(Label_A)
def alice_coin():
    return wrap_secret(7)


@secret_block(Label_B)
def bob_coin():
    return wrap_secret(9)


alice_vault: Vault[Label_A] = Vault(alice_coin, "alice")
bob_vault: Vault[Label_B] = Vault(bob_coin, "bob")


def audit_alice() -> int:
    @secret_block(Label_A)
    def doubled():
        return wrap_secret(unwrap_secret(alice_vault.inner) * 2)

    return declassify(doubled)


def audit_bob() -> int:
    @secret_block(Label_B)
    def doubled():
        return wrap_secret(unwrap_secret(bob_vault.inner) * 2)

    return declassify(doubled)


print("alice:", audit_alice())
print("bob:", audit_bob())
