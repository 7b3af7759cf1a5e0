# expect: accept
# transcript: accept_early_exit.out
# notes: early return leaves the block; control resumes right after it
from labelflow import Secret, declassify, secret_block, wrap_secret
from labelflow.demo_lattice import Label_A

__secrecy_policies__ = ["a", "b"]


@secret_block(Label_A)
def first_heavy():
    acc = 0
    i = 0
    while i < 10:
        acc += i
        if acc > 5:
            return wrap_secret(acc)
        i += 1
    return wrap_secret(acc)


print("resumed")
print("value:", declassify(first_heavy))
