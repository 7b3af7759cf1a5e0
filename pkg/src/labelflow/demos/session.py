"""Battleship game session: two player tasks over an in-process channel.

The session is backend-agnostic: it drives either the labeled
implementation (loaded through the transform pass) or the unlabeled twin,
both of which expose make_player_a/b and decide_hit_a/b.  Only public
values cross the channel: guesses, and hit verdicts that the backend has
already declassified.
"""

from __future__ import annotations

import queue
import random
import threading
from dataclasses import dataclass

TOTAL_SHIP_CELLS = 17  # 5 + 4 + 3 + 3 + 2
GRID_SIZE = 10


class ChannelClosed(Exception):
    pass


class ScriptExhausted(Exception):
    pass


class Channel:
    """One direction of the bidirectional player link."""

    _CLOSE = object()

    def __init__(self):
        self._q: queue.Queue = queue.Queue()

    def send(self, item):
        self._q.put(item)

    def recv(self, timeout: float = 30.0):
        item = self._q.get(timeout=timeout)
        if item is self._CLOSE:
            raise ChannelClosed
        return item

    def close(self):
        self._q.put(self._CLOSE)


@dataclass
class Endpoint:
    inbox: Channel
    outbox: Channel

    def send(self, item):
        self.outbox.send(item)

    def recv(self):
        return self.inbox.recv()

    def close(self):
        self.outbox.close()


def make_link() -> tuple[Endpoint, Endpoint]:
    ab, ba = Channel(), Channel()
    return Endpoint(inbox=ba, outbox=ab), Endpoint(inbox=ab, outbox=ba)


def _guess_sequence(seed: int) -> list[tuple[int, int]]:
    cells = [(r, c) for r in range(GRID_SIZE) for c in range(GRID_SIZE)]
    random.Random(seed).shuffle(cells)
    return cells


class PromptSource:
    """Interactive guess source: reads "row col" lines from the terminal.

    Scripted and interactive play share the session code path; only the
    source of guesses differs.
    """

    def __init__(self, prompt: str = "your guess (row col): "):
        self.prompt = prompt

    def __getitem__(self, _index) -> tuple[int, int]:
        while True:
            try:
                line = input(self.prompt)
            except EOFError:
                raise ScriptExhausted("interactive input closed") from None
            parts = line.split()
            if len(parts) == 2:
                try:
                    return (int(parts[0]), int(parts[1]))
                except ValueError:
                    pass
            print("enter two integers, e.g.: 3 7")

    def __len__(self) -> int:
        return 1 << 30  # prompts never run out until EOF


def parse_script(text: str) -> list[tuple[int, int]]:
    """Guess script: one "row col" pair per line, players alternating."""
    guesses = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        row_s, col_s = line.split()
        guesses.append((int(row_s), int(col_s)))
    return guesses


def _in_bounds(guess: tuple[int, int]) -> bool:
    row, col = guess
    return 0 <= row < GRID_SIZE and 0 <= col < GRID_SIZE


@dataclass
class _Side:
    """One player's view: its own guesses and verdict logic."""

    name: str
    player: object
    decide_hit: object
    guesses: list[tuple[int, int]]
    next_guess: int = 0
    hits_scored: int = 0
    hits_taken: int = 0

    def take_guess(self, transcript: list[str]) -> tuple[int, int]:
        while True:
            if self.next_guess >= len(self.guesses):
                raise ScriptExhausted(self.name)
            guess = self.guesses[self.next_guess]
            self.next_guess += 1
            if _in_bounds(guess):
                return guess
            transcript.append(
                f"{self.name} guess {guess} out of bounds; re-prompting")


def _responder(side: _Side, chan: Endpoint):
    """Player B task: answer guesses, then send its own guess each round."""
    try:
        while True:
            kind, *payload = chan.recv()
            if kind == "guess":
                row, col = payload
                hit = side.decide_hit(side.player, row, col)
                side.hits_taken += 1 if hit else 0
                sunk = side.hits_taken >= TOTAL_SHIP_CELLS
                chan.send(("verdict", hit, sunk))
                if sunk:
                    return
                guess = side.take_guess([])
                chan.send(("guess", *guess))
            elif kind == "verdict":
                hit, sunk = payload
                side.hits_scored += 1 if hit else 0
                if sunk:
                    return
            elif kind == "close":
                return
    except ScriptExhausted:
        chan.close()
        return
    except (ChannelClosed, queue.Empty):
        return


def battleship_session(backend, seed_a: int, seed_b: int,
                       script: list[tuple[int, int]] | None = None,
                       interactive: bool = False) -> list[str]:
    """Play one scripted, seeded, or interactive game; return the transcript.

    The transcript records guesses and verdicts only, never positions.
    Player A opens every round; the host (A's task) writes the transcript.
    """
    player_a = backend.make_player_a(seed_a)
    player_b = backend.make_player_b(seed_b)

    if script is not None:
        guesses_a = [g for i, g in enumerate(script) if i % 2 == 0]
        guesses_b = [g for i, g in enumerate(script) if i % 2 == 1]
    else:
        guesses_a = _guess_sequence(seed_a ^ 0x5EED)
        guesses_b = _guess_sequence(seed_b ^ 0x5EED)
    if interactive:
        guesses_a = PromptSource()

    side_a = _Side("A", player_a, backend.decide_hit_a, guesses_a)
    side_b = _Side("B", player_b, backend.decide_hit_b, guesses_b)
    end_a, end_b = make_link()
    # B's outgoing guesses come through the responder loop, which pulls from
    # its own side state; pre-wire them.
    transcript: list[str] = []

    task_b = threading.Thread(
        target=_responder, args=(side_b, end_b), daemon=True)
    task_b.start()

    try:
        while True:
            row, col = side_a.take_guess(transcript)
            end_a.send(("guess", row, col))
            _, hit, sunk = end_a.recv()
            side_a.hits_scored += 1 if hit else 0
            transcript.append(
                f"A guesses ({row}, {col}): {'hit' if hit else 'miss'}")
            if sunk:
                transcript.append("A sinks the fleet and wins")
                break
            _, b_row, b_col = end_a.recv()
            b_hit = backend.decide_hit_a(player_a, b_row, b_col)
            side_a.hits_taken += 1 if b_hit else 0
            b_sunk = side_a.hits_taken >= TOTAL_SHIP_CELLS
            end_a.send(("verdict", b_hit, b_sunk))
            transcript.append(
                f"B guesses ({b_row}, {b_col}): {'hit' if b_hit else 'miss'}")
            if b_sunk:
                transcript.append("B sinks the fleet and wins")
                break
    except ScriptExhausted:
        transcript.append("script exhausted; game abandoned")
    except (ChannelClosed, queue.Empty):
        transcript.append("channel closed; game abandoned")
    finally:
        end_a.close()
        task_b.join(timeout=10.0)

    return transcript


def interrupted_session(backend, seed_a: int, seed_b: int) -> list[str]:
    """Open a game and close the channel immediately; must end cleanly."""
    player_b = backend.make_player_b(seed_b)
    side_b = _Side("B", player_b, backend.decide_hit_b, [])
    end_a, end_b = make_link()
    task_b = threading.Thread(
        target=_responder, args=(side_b, end_b), daemon=True)
    task_b.start()
    end_a.close()
    task_b.join(timeout=10.0)
    return ["channel closed; game abandoned"]
