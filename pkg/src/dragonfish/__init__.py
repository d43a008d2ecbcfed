"""Dragonfish: a Dragonchess engine with evolved chess-derived heuristics."""

__version__ = "0.1.0"

from .board import (  # noqa: F401
    GOLD,
    SCARLET,
    Move,
    MoveKind,
    Position,
    apply_move,
    from_dpn,
    initial_position,
    mirror,
    square_index,
    square_of,
    to_dpn,
    undo_move,
)
from .movegen import (  # noqa: F401
    GameResult,
    attacks,
    format_move,
    is_frozen,
    legal_moves,
    parse_move,
    perft,
    terminal_state,
)
