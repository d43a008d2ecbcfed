"""Legal move generation, attack probes, terminal detection and perft."""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .board import (
    FILE_LETTERS,
    GOLD,
    GROUND,
    HERO,
    Move,
    MoveKind,
    N_CELLS,
    Position,
    SCARLET,
    UNDERWORLD,
    square_index,
)
from .errors import DataError, DomainError
from .tables import TABLES


class GameResult(Enum):
    ONGOING = "ongoing"
    GOLD_WINS = "gold"
    SCARLET_WINS = "scarlet"
    DRAW = "draw"


_RESULT_BY_CODE = {
    0: GameResult.ONGOING,
    1: GameResult.GOLD_WINS,
    2: GameResult.SCARLET_WINS,
    3: GameResult.DRAW,
}


@dataclass
class MoveList:
    moves: list[Move]
    generated_for: int

    def __len__(self) -> int:
        return len(self.moves)

    def __iter__(self):
        return iter(self.moves)


def _moves_from_buffer(buf: np.ndarray, n: int, position: Position) -> list[Move]:
    side = position.side_to_move
    clock = position.halfmove_clock_for_draw
    moves = []
    for i in range(n):
        kind = MoveKind(int(buf[i, 2]))
        moves.append(
            Move(
                from_sq=int(buf[i, 0]),
                to_sq=int(buf[i, 1]),
                kind=kind,
                captured=int(buf[i, 3]),
                promoted_to=HERO * side if kind == MoveKind.PROMOTION else 0,
                quiet_clock=clock,
            )
        )
    moves.sort(key=Move.sort_key)
    return moves


def legal_moves(position: Position) -> MoveList:
    """All legal moves for the side to move, sorted by (from, to, kind)."""
    buf = np.empty((kernels.MOVE_BUF_ROWS, 4), dtype=np.int64)
    n = kernels.gen_legal(position.cells, position.side_to_move, buf, TABLES)
    return MoveList(_moves_from_buffer(buf, n, position), position.side_to_move)


def pseudo_legal_moves(position: Position, side: int | None = None) -> MoveList:
    """Moves by the movement table alone (no King-safety filter), for either side."""
    side = position.side_to_move if side is None else side
    buf = np.empty((kernels.MOVE_BUF_ROWS, 4), dtype=np.int64)
    n = kernels.gen_pseudo(position.cells, side, buf, TABLES)
    shadow = Position(
        cells=position.cells,
        side_to_move=side,
        ply_count=position.ply_count,
        halfmove_clock_for_draw=position.halfmove_clock_for_draw,
    )
    return MoveList(_moves_from_buffer(buf, n, shadow), side)


def is_frozen(position: Position, square: int) -> bool:
    """True iff the piece on ``square`` sits on Ground directly above an enemy
    Basilisk.  Raises on an empty square."""
    piece = int(position.cells[square])
    if piece == 0:
        raise DomainError(f"no piece on square {square}")
    if square // 96 != GROUND:
        return False
    below = square + 96
    return int(position.cells[below]) == (-13 if piece > 0 else 13)


def attacks(position: Position, square: int, by: int) -> bool:
    """True iff ``by`` has a pseudo-legal capture targeting ``square`` (remote
    captures and vertical captures included; frozen pieces attack nothing)."""
    if not 0 <= square < N_CELLS:
        raise DomainError(f"cell index out of range: {square}")
    return bool(kernels.is_attacked(position.cells, square, by, TABLES))


def in_check(position: Position, color: int) -> bool:
    ksq = int(kernels.find_king(position.cells, color))
    return ksq >= 0 and bool(kernels.is_attacked(position.cells, ksq, -color, TABLES))


def terminal_state(position: Position) -> GameResult:
    """Checkmate/stalemate/draw-cap state for the side to move."""
    code = kernels.terminal_code(
        position.cells,
        position.side_to_move,
        position.halfmove_clock_for_draw,
        position.ply_count,
        TABLES,
    )
    return _RESULT_BY_CODE[int(code)]


def perft(position: Position, depth: int) -> int:
    """Leaf count of the legal-move tree at ``depth`` (perft(0) = 1)."""
    if depth < 0:
        raise DomainError(f"perft depth must be >= 0, got {depth}")
    return int(
        kernels.perft_count(position.cells.copy(), position.side_to_move, depth, TABLES)
    )


# --- move text notation -------------------------------------------------------
#
#   <L><file><rank+1>-<L><file><rank+1>[x|=H|r]
#
# with L in {1,2,3} (Sky=1, Ground=2, Underworld=3), e.g. "2g2-2g3".  Suffixes:
# "x" plain capture, "=H" promotion (capturing or not), "r" remote capture.

_MOVE_RE = re.compile(
    r"^([123])([a-l])([1-8])-([123])([a-l])([1-8])(x|=H|r)?$"
)


def _square_text(sq: int) -> str:
    level = sq // 96
    rank = sq % 96 // 12
    file = sq % 12
    return f"{level + 1}{FILE_LETTERS[file]}{rank + 1}"


def format_move(move: Move) -> str:
    text = f"{_square_text(move.from_sq)}-{_square_text(move.to_sq)}"
    if move.kind == MoveKind.PROMOTION:
        return text + "=H"
    if move.kind == MoveKind.REMOTE_CAPTURE:
        return text + "r"
    if move.captured != 0:
        return text + "x"
    return text


def parse_squares(text: str) -> tuple[int, int, str]:
    """Parse notation into (from, to, suffix) without legality context."""
    m = _MOVE_RE.match(text.strip())
    if m is None:
        raise DataError(f"bad move notation: {text!r}")
    lf, ff, rf, lt, ft, rt, suffix = m.groups()
    from_sq = square_index(int(lf) - 1, int(rf) - 1, FILE_LETTERS.index(ff))
    to_sq = square_index(int(lt) - 1, int(rt) - 1, FILE_LETTERS.index(ft))
    return from_sq, to_sq, suffix or ""


def parse_move(text: str, position: Position) -> Move:
    """Resolve notation against the legal moves of ``position``.

    (from, to) identifies a legal move uniquely under the ruleset; the parsed
    suffix is still required to agree with the resolved move.
    """
    from_sq, to_sq, suffix = parse_squares(text)
    for move in legal_moves(position).moves:
        if move.from_sq == from_sq and move.to_sq == to_sq:
            expected = format_move(move)
            given = f"{_square_text(from_sq)}-{_square_text(to_sq)}{suffix}"
            if expected != given:
                raise DataError(
                    f"move suffix mismatch: {text!r} resolved to {expected!r}"
                )
            return move
    raise DomainError(f"move {text!r} is not legal in this position")
