# expect: accept
# transcript: accept_match_loop.out
# notes: match statements and loops inside a block
from labelflow import Secret, declassify, secret_block, wrap_secret
from labelflow.demo_lattice import Label_A

__secrecy_policies__ = ["a", "b"]

GRADES = ("a", "b", "a", "c")


@secret_block(Label_A)
def score():
    total = 0
    for grade in GRADES:
        match grade:
            case "a":
                total += 3
            case "b":
                total += 2
            case _:
                total += 1
    return wrap_secret(total)


print("score:", declassify(score))
