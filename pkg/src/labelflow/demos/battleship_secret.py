"""Battleship with labeled ship placements.

Each player's ship grid is a secret at that player's label; the only values
that ever leave the labeled world are the per-guess hit verdicts, released
at exactly two declassify call sites (one per player).  Placement runs
inside the setup blocks and draws its randomness from an explicitly
threaded counter-based generator, keeping every helper genuinely side
effect free.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Generic, TypeAlias, TypeVar

from labelflow import (Secret, declassify, invisible_side_effect_free,
                       secret_block, side_effect_free, std,
                       unwrap_secret_ref, wrap_secret)
from labelflow.demo_lattice import Label_A, Label_B

__secrecy_policies__ = ["a", "b"]

Grid: TypeAlias = list[list[bool]]
GRID_SIZE = 10
SHIP_LENGTHS = (5, 4, 3, 3, 2)  # carrier, battleship, cruiser, submarine, destroyer
PLACEMENT_RETRY_LIMIT = 10000

UNGUESSED = 0
MISS = 1
HIT = 2

L = TypeVar("L")

_U64 = 18446744073709551616
_GOLDEN = 11400714819323198485
_MIX1 = 13787848793156543929
_MIX2 = 10723151780598845931


@invisible_side_effect_free
@dataclass(frozen=True)
class RngState:
    seed: int = 0


@invisible_side_effect_free
@dataclass(frozen=True)
class Placement:
    row: int = 0
    col: int = 0
    length: int = 0
    across: bool = True


@invisible_side_effect_free
@dataclass
class Player(Generic[L]):
    ship_positions: Secret[Grid, L] = None
    guesses: list[list[int]] = None


@side_effect_free
def rng_next(state: RngState) -> tuple[int, RngState]:
    mixed = (state.seed + _GOLDEN) % _U64
    z = mixed
    z = ((z ^ (z >> 30)) * _MIX1) % _U64
    z = ((z ^ (z >> 27)) * _MIX2) % _U64
    z = z ^ (z >> 31)
    return (z, RngState(mixed))


@side_effect_free
def legal_placement(grid: Grid, p: Placement) -> bool:
    ok = True
    i = 0
    while i < p.length:
        r = p.row if p.across else p.row + i
        c = p.col + i if p.across else p.col
        if r >= GRID_SIZE or c >= GRID_SIZE:
            ok = False
        else:
            if (grid[r])[c]:
                ok = False
        i = i + 1
    return ok


@side_effect_free
def place_ship(grid: Grid, p: Placement) -> int:
    i = 0
    while i < p.length:
        r = p.row if p.across else p.row + i
        c = p.col + i if p.across else p.col
        grid[r][c] = True
        i = i + 1
    return i


@side_effect_free
def random_maybe_illegal_placement(grid: Grid, length: int,
                                   state: RngState) -> tuple[Placement, RngState]:
    draw_row, state2 = rng_next(state)
    draw_col, state3 = rng_next(state2)
    draw_dir, state4 = rng_next(state3)
    placement = Placement(draw_row % GRID_SIZE, draw_col % GRID_SIZE,
                          length, draw_dir % 2 == 0)
    return (placement, state4)


@side_effect_free
def random_placement(grid: Grid, length: int,
                     state: RngState) -> tuple[Placement, RngState]:
    placement, state2 = random_maybe_illegal_placement(grid, length, state)
    tries = 0
    while not legal_placement(grid, placement) and tries < PLACEMENT_RETRY_LIMIT:
        placement, state2 = random_maybe_illegal_placement(grid, length, state2)
        tries = tries + 1
    return (placement, state2)


@side_effect_free
def is_occupied(grid: Grid, row: int, col: int) -> bool:
    return (grid[row])[col]


def fresh_guess_grid() -> list[list[int]]:
    return [[UNGUESSED] * GRID_SIZE for _ in range(GRID_SIZE)]


def make_player_a(seed: int) -> Player[Label_A]:
    @secret_block(Label_A)
    def ship_positions():
        grid = std.grid.fill(GRID_SIZE, GRID_SIZE, False)
        state = RngState(seed)
        for length in SHIP_LENGTHS:
            placement, state = random_placement(grid, length, state)
            place_ship(grid, placement)
        return wrap_secret(grid)

    return Player(ship_positions, fresh_guess_grid())


def make_player_b(seed: int) -> Player[Label_B]:
    @secret_block(Label_B)
    def ship_positions():
        grid = std.grid.fill(GRID_SIZE, GRID_SIZE, False)
        state = RngState(seed)
        for length in SHIP_LENGTHS:
            placement, state = random_placement(grid, length, state)
            place_ship(grid, placement)
        return wrap_secret(grid)

    return Player(ship_positions, fresh_guess_grid())


def decide_hit_a(player: Player[Label_A], row: int, col: int) -> bool:
    @secret_block(Label_A)
    def verdict():
        return wrap_secret(is_occupied(
            unwrap_secret_ref(player.ship_positions), row, col))

    return declassify(verdict)


def decide_hit_b(player: Player[Label_B], row: int, col: int) -> bool:
    @secret_block(Label_B)
    def verdict():
        return wrap_secret(is_occupied(
            unwrap_secret_ref(player.ship_positions), row, col))

    return declassify(verdict)
