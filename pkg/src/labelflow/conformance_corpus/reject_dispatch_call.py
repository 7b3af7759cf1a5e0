# expect: reject E-DISPATCH-CALL
# notes: dispatch definitions are escape-marked; ordinary code may not call them
from labelflow import side_effect_free

__secrecy_policies__ = ["a", "b"]


@side_effect_free
def triple(n: int) -> int:
    return n * 3


answer = triple(14)
