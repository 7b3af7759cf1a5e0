# expect: accept
# transcript: accept_sef_chain.out
# notes: annotated functions call other annotated functions transitively
from labelflow import (Secret, declassify, secret_block,
                       side_effect_free, unwrap_secret, wrap_secret)
from labelflow.demo_lattice import Label_B

__secrecy_policies__ = ["a", "b"]


@side_effect_free
def square(n: int) -> int:
    return n * n


@side_effect_free
def sum_of_squares(limit: int) -> int:
    total = 0
    i = 1
    while i <= limit:
        total += square(i)
        i += 1
    return total


@secret_block(Label_B)
def sealed_limit():
    return wrap_secret(4)


@secret_block(Label_B)
def sealed_total():
    return wrap_secret(sum_of_squares(unwrap_secret(sealed_limit)))


print("total:", declassify(sealed_total))
