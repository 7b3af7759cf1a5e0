# expect: accept
# transcript: accept_validation_pattern.out
# notes: validate a secret key by declassifying only the error string
from labelflow import (Secret, declassify, secret_block, std,
                       unwrap_secret_ref, wrap_secret)
from labelflow.demo_lattice import Label_A

__secrecy_policies__ = ["a", "b"]

EXPECTED_LEN = 8


def seal_key(raw: str) -> Secret[str, Label_A]:
    @secret_block(Label_A)
    def key():
        return wrap_secret(raw)

    return key


def validate_key(key: Secret[str, Label_A]) -> str:
    @secret_block(Label_A)
    def sec_error():
        u_key = unwrap_secret_ref(key)
        is_hex = True
        for c in std.str.chars(u_key):
            if not std.char.is_digit(c, 16):
                is_hex = False
        error_string = std.str.from_("")
        if std.str.len(u_key) != EXPECTED_LEN:
            error_string = std.str.concat(
                "invalid length: ", std.int.to_str(std.str.len(u_key)))
        else:
            if not is_hex:
                error_string = std.str.from_(
                    "invalid character found (must be hex digits)")
        return wrap_secret(error_string)

    return declassify(sec_error)


for raw in ("deadbeef", "abc", "deadbeeg"):
    verdict = validate_key(seal_key(raw))
    if std.str.is_empty(verdict):
        print("ok")
    else:
        print("error:", verdict)
