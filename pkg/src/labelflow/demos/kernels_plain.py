"""Unlabeled benchmark kernels: the baselines the secret mode is timed against.

Three desk-scale kernels with call-free inner loops: a pairwise-force
update (softened inverse-square, no square roots in the hot path), a prime
sieve, and a hex-digit scan.
"""

from __future__ import annotations

GOLDEN = 11400714819323198485
U64 = 18446744073709551616
HEX_DIGITS = "0123456789abcdef"


def pairwise_forces(bodies: int, steps: int) -> float:
    xs = []
    ys = []
    i = 0
    while i < bodies:
        xs.append(((i * 37) % 101) * 0.25)
        ys.append(((i * 73) % 97) * 0.5)
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


def sieve_count(limit: int) -> int:
    marks = [True] * limit
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


def scan_hex(text: str) -> int:
    count = 0
    for c in text:
        if c in HEX_DIGITS:
            count = count + 1
    return count


def make_scan_input(length: int) -> str:
    # Deterministic mixed text; built outside the timed region in both modes.
    chars = []
    state = 0
    alphabet = "0123456789abcdefghijklmnopqrstuvwxyz -"
    for _ in range(length):
        state = (state + GOLDEN) % U64
        chars.append(alphabet[state % len(alphabet)])
    return "".join(chars)


def run_pairwise(bodies: int, steps: int) -> float:
    return pairwise_forces(bodies, steps)


def run_sieve(limit: int) -> int:
    return sieve_count(limit)


def run_scan(text: str) -> int:
    return scan_hex(text)
