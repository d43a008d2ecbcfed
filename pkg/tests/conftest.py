"""Shared fixtures and helpers for the test suite."""

from __future__ import annotations

import random

import numpy as np
import pytest

from dragonfish.board import (
    GOLD,
    KIND_LEVELS,
    KING,
    N_CELLS,
    Position,
    SCARLET,
    STARTING_COUNTS,
    apply_move,
    initial_position,
    square_index,
)
from dragonfish.movegen import GameResult, legal_moves, terminal_state


def random_playout_positions(seed: int, n_positions: int, max_plies: int = 120):
    """Positions reached by random legal play from the start (the start itself
    included).  Deterministic in ``seed``."""
    rng = random.Random(seed)
    out = []
    position = initial_position()
    plies = 0
    while len(out) < n_positions:
        out.append(position.copy())
        if plies >= max_plies or terminal_state(position) != GameResult.ONGOING:
            position = initial_position()
            plies = 0
            continue
        moves = legal_moves(position).moves
        position = apply_move(position, rng.choice(moves))
        plies += 1
    return out


def random_scatter_position(rng: random.Random) -> Position:
    """A synthetic position: both Kings plus a random sample of other pieces
    scattered on levels they may occupy.  Not necessarily reachable; used by
    properties that hold for any well-formed position."""
    cells = np.zeros(N_CELLS, dtype=np.int64)
    used = set()

    def place(code: int) -> None:
        kind = abs(code)
        while True:
            level = rng.choice(KIND_LEVELS[kind])
            sq = square_index(level, rng.randrange(8), rng.randrange(12))
            if sq not in used:
                used.add(sq)
                cells[sq] = code
                return

    for color in (GOLD, SCARLET):
        place(KING * color)
        for kind, count in STARTING_COUNTS.items():
            if kind == KING:
                continue
            for _ in range(rng.randint(0, count)):
                if rng.random() < 0.35:
                    place(kind * color)
    return Position(
        cells=cells,
        side_to_move=rng.choice((GOLD, SCARLET)),
        ply_count=rng.randrange(0, 400),
        halfmove_clock_for_draw=rng.randrange(0, 60),
    )


@pytest.fixture(scope="session")
def playout_positions():
    return random_playout_positions(seed=20240, n_positions=60)
