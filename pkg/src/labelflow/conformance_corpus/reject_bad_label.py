# expect: reject E-BAD-LABEL
# notes: block labels must come from the declared family
from labelflow import Secret, secret_block, wrap_secret

__secrecy_policies__ = ["a", "b"]


@secret_block(Label_C)
def ghost():
    return wrap_secret(0)
