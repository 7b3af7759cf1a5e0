# expect: reject E-OUTSIDE-BLOCK
# notes: wrap_secret is not a defined function outside secret blocks
from labelflow import Secret, wrap_secret

__secrecy_policies__ = ["a", "b"]

loose = wrap_secret(5)
