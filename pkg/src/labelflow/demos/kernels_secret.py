"""Secret-wrapped benchmark kernels.

Same logic as kernels_plain, with each kernel's primary computation marked
side effect free and invoked from inside a secret block; the result leaves
through declassify.  Inner loops are call-free so the executed expansion
matches the plain twin operation for operation.
"""

from __future__ import annotations

from labelflow import (declassify, secret_block, side_effect_free, std,
                       wrap_secret)
from labelflow.demo_lattice import Label_A

__secrecy_policies__ = ["a", "b"]

HEX_DIGITS = "0123456789abcdef"


@side_effect_free
def pairwise_forces(bodies: int, steps: int) -> float:
    xs = std.list.repeat(0.0, 0)
    ys = std.list.repeat(0.0, 0)
    i = 0
    while i < bodies:
        std.list.push(xs, i * 37 % 101 * 0.25)
        std.list.push(ys, i * 73 % 97 * 0.5)
        i = i + 1
    total = 0.0
    step = 0
    while step < steps:
        a = 0
        while a < bodies:
            b = a + 1
            while b < bodies:
                dx = xs[a] - xs[b]
                dy = ys[a] - ys[b]
                r2 = dx * dx + dy * dy + 0.5
                total = total + 1.0 / r2
                b = b + 1
            a = a + 1
        step = step + 1
    return total


@side_effect_free
def sieve_count(limit: int) -> int:
    marks = std.list.repeat(True, limit)
    marks[0] = False
    marks[1] = False
    i = 2
    while i * i < limit:
        if marks[i]:
            j = i * i
            while j < limit:
                marks[j] = False
                j = j + i
        i = i + 1
    count = 0
    k = 0
    while k < limit:
        if marks[k]:
            count = count + 1
        k = k + 1
    return count


@side_effect_free
def scan_hex(text: str) -> int:
    count = 0
    for c in text:
        if c in HEX_DIGITS:
            count = count + 1
    return count


def run_pairwise(bodies: int, steps: int) -> float:
    @secret_block(Label_A)
    def sealed():
        return wrap_secret(pairwise_forces(bodies, steps))

    return declassify(sealed)


def run_sieve(limit: int) -> int:
    @secret_block(Label_A)
    def sealed():
        return wrap_secret(sieve_count(limit))

    return declassify(sealed)


def run_scan(text: str) -> int:
    @secret_block(Label_A)
    def sealed():
        return wrap_secret(scan_hex(text))

    return declassify(sealed)
