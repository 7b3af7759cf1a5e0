"""Unlabeled twin of the Battleship demo: same logic, bare grids.

Placement and verdicts must match battleship_secret exactly under equal
seeds; scripted-game transcripts are compared against this module.
"""

from __future__ import annotations

from dataclasses import dataclass

GRID_SIZE = 10
SHIP_LENGTHS = (5, 4, 3, 3, 2)
PLACEMENT_RETRY_LIMIT = 10000

UNGUESSED = 0
MISS = 1
HIT = 2

_U64 = 18446744073709551616
_GOLDEN = 11400714819323198485
_MIX1 = 13787848793156543929
_MIX2 = 10723151780598845931


@dataclass(frozen=True)
class RngState:
    seed: int = 0


@dataclass(frozen=True)
class Placement:
    row: int = 0
    col: int = 0
    length: int = 0
    across: bool = True


@dataclass
class Player:
    ship_positions: list[list[bool]] = None
    guesses: list[list[int]] = None


def rng_next(state: RngState) -> tuple[int, RngState]:
    mixed = (state.seed + _GOLDEN) % _U64
    z = mixed
    z = ((z ^ (z >> 30)) * _MIX1) % _U64
    z = ((z ^ (z >> 27)) * _MIX2) % _U64
    z = z ^ (z >> 31)
    return (z, RngState(mixed))


def legal_placement(grid: list[list[bool]], p: Placement) -> bool:
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


def place_ship(grid: list[list[bool]], p: Placement) -> int:
    i = 0
    while i < p.length:
        r = p.row if p.across else p.row + i
        c = p.col + i if p.across else p.col
        grid[r][c] = True
        i = i + 1
    return i


def random_maybe_illegal_placement(grid, length, state):
    draw_row, state2 = rng_next(state)
    draw_col, state3 = rng_next(state2)
    draw_dir, state4 = rng_next(state3)
    placement = Placement(draw_row % GRID_SIZE, draw_col % GRID_SIZE,
                          length, draw_dir % 2 == 0)
    return (placement, state4)


def random_placement(grid, length, state):
    placement, state2 = random_maybe_illegal_placement(grid, length, state)
    tries = 0
    while not legal_placement(grid, placement) and tries < PLACEMENT_RETRY_LIMIT:
        placement, state2 = random_maybe_illegal_placement(grid, length, state2)
        tries = tries + 1
    return (placement, state2)


def is_occupied(grid, row: int, col: int) -> bool:
    return (grid[row])[col]


def fresh_guess_grid() -> list[list[int]]:
    return [[UNGUESSED] * GRID_SIZE for _ in range(GRID_SIZE)]


def _setup_grid(seed: int) -> list[list[bool]]:
    grid = [[False] * GRID_SIZE for _ in range(GRID_SIZE)]
    state = RngState(seed)
    for length in SHIP_LENGTHS:
        placement, state = random_placement(grid, length, state)
        place_ship(grid, placement)
    return grid


def make_player_a(seed: int) -> Player:
    return Player(_setup_grid(seed), fresh_guess_grid())


def make_player_b(seed: int) -> Player:
    return Player(_setup_grid(seed), fresh_guess_grid())


def decide_hit_a(player: Player, row: int, col: int) -> bool:
    return is_occupied(player.ship_positions, row, col)


def decide_hit_b(player: Player, row: int, col: int) -> bool:
    return is_occupied(player.ship_positions, row, col)
