"""Board geometry and game state.

Three vertically stacked 12x8 boards are flattened into one 288-cell array.
Cell ``level*96 + rank*12 + file`` holds a signed piece code: positive for
Gold, negative for Scarlet, 0 for an empty square.  Rank 0 is Gold's home
rank on every level; file 0 is file "a".
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import IntEnum

import numpy as np

from .errors import ContractViolation, DataError, DomainError

# Levels, top to bottom.
SKY = 0
GROUND = 1
UNDERWORLD = 2

N_LEVELS = 3
N_RANKS = 8
N_FILES = 12
CELLS_PER_LEVEL = N_RANKS * N_FILES  # 96
N_CELLS = N_LEVELS * CELLS_PER_LEVEL  # 288

GOLD = 1
SCARLET = -1

# Piece kinds (array magnitude).
SYLPH = 1
GRIFFIN = 2
DRAGON = 3
WARRIOR = 4
OLIPHANT = 5
UNICORN = 6
HERO = 7
THIEF = 8
CLERIC = 9
MAGE = 10
KING = 11
PALADIN = 12
BASILISK = 13
DWARF = 14
ELEMENTAL = 15

KIND_NAMES = {
    SYLPH: "Sylph",
    GRIFFIN: "Griffin",
    DRAGON: "Dragon",
    WARRIOR: "Warrior",
    OLIPHANT: "Oliphant",
    UNICORN: "Unicorn",
    HERO: "Hero",
    THIEF: "Thief",
    CLERIC: "Cleric",
    MAGE: "Mage",
    KING: "King",
    PALADIN: "Paladin",
    BASILISK: "Basilisk",
    DWARF: "Dwarf",
    ELEMENTAL: "Elemental",
}

# Levels each kind may ever occupy.
KIND_LEVELS = {
    SYLPH: (SKY, GROUND),
    GRIFFIN: (SKY, GROUND),
    DRAGON: (SKY,),
    WARRIOR: (GROUND,),
    OLIPHANT: (GROUND,),
    UNICORN: (GROUND,),
    HERO: (SKY, GROUND, UNDERWORLD),
    THIEF: (GROUND,),
    CLERIC: (SKY, GROUND, UNDERWORLD),
    MAGE: (SKY, GROUND, UNDERWORLD),
    KING: (SKY, GROUND, UNDERWORLD),
    PALADIN: (SKY, GROUND, UNDERWORLD),
    BASILISK: (UNDERWORLD,),
    DWARF: (GROUND, UNDERWORLD),
    ELEMENTAL: (GROUND, UNDERWORLD),
}

# Pieces per side at the start of a game, by kind.
STARTING_COUNTS = {
    SYLPH: 6,
    GRIFFIN: 2,
    DRAGON: 1,
    WARRIOR: 12,
    OLIPHANT: 2,
    UNICORN: 2,
    HERO: 2,
    THIEF: 2,
    CLERIC: 1,
    MAGE: 1,
    KING: 1,
    PALADIN: 1,
    BASILISK: 2,
    DWARF: 6,
    ELEMENTAL: 1,
}

# Draw bookkeeping caps: plies since the last capture or Warrior move, and
# total game length.  Both guarantee termination of engine-vs-engine play.
QUIET_PLY_CAP = 100
TOTAL_PLY_CAP = 600

FILE_LETTERS = "abcdefghijkl"


def square_index(level: int, rank: int, file: int) -> int:
    """Flatten (level, rank, file) into a 0..287 cell index."""
    if not (0 <= level < N_LEVELS and 0 <= rank < N_RANKS and 0 <= file < N_FILES):
        raise DomainError(f"square out of range: level={level} rank={rank} file={file}")
    return level * CELLS_PER_LEVEL + rank * N_FILES + file


def square_of(index: int) -> tuple[int, int, int]:
    """Inverse of :func:`square_index`."""
    if not 0 <= index < N_CELLS:
        raise DomainError(f"cell index out of range: {index}")
    level, rest = divmod(index, CELLS_PER_LEVEL)
    rank, file = divmod(rest, N_FILES)
    return level, rank, file


def level_of(index: int) -> int:
    return index // CELLS_PER_LEVEL


def rank_of(index: int) -> int:
    return index % CELLS_PER_LEVEL // N_FILES


def file_of(index: int) -> int:
    return index % N_FILES


def square_name(index: int) -> str:
    """Human-readable name, e.g. Ground g1 -> '2g1' (levels print as 1=Sky..3=Underworld)."""
    level, rank, file = square_of(index)
    return f"{level + 1}{FILE_LETTERS[file]}{rank + 1}"


class MoveKind(IntEnum):
    NORMAL = 0
    REMOTE_CAPTURE = 1
    PROMOTION = 2


@dataclass(frozen=True, slots=True)
class Move:
    """One move.  For a remote capture the mover stays on ``from_sq`` and only the
    piece on ``to_sq`` is removed.  ``quiet_clock`` keeps the quiet-ply clock of the
    position the move was generated in, so that undo is an exact inverse."""

    from_sq: int
    to_sq: int
    kind: MoveKind = MoveKind.NORMAL
    captured: int = 0
    promoted_to: int = 0
    quiet_clock: int = 0

    def sort_key(self) -> tuple[int, int, int]:
        return (self.from_sq, self.to_sq, int(self.kind))


@dataclass
class Position:
    """Full game state.  Treated as a value: all mutation goes through
    :func:`apply_move` / :func:`undo_move` (or the in-place pair on a copy you own)."""

    cells: np.ndarray
    side_to_move: int = GOLD
    ply_count: int = 0
    halfmove_clock_for_draw: int = 0

    def copy(self) -> "Position":
        return Position(
            cells=self.cells.copy(),
            side_to_move=self.side_to_move,
            ply_count=self.ply_count,
            halfmove_clock_for_draw=self.halfmove_clock_for_draw,
        )

    def key(self) -> bytes:
        """Deterministic fingerprint of the full state."""
        head = np.array(
            [self.side_to_move, self.ply_count, self.halfmove_clock_for_draw],
            dtype=np.int64,
        )
        return head.tobytes() + self.cells.tobytes()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Position):
            return NotImplemented
        return (
            self.side_to_move == other.side_to_move
            and self.ply_count == other.ply_count
            and self.halfmove_clock_for_draw == other.halfmove_clock_for_draw
            and bool(np.array_equal(self.cells, other.cells))
        )


def empty_position(side_to_move: int = GOLD) -> Position:
    return Position(cells=np.zeros(N_CELLS, dtype=np.int64), side_to_move=side_to_move)


# Starting layout for Gold, per level: {rank: {file: kind}}.  Scarlet mirrors it
# on ranks 7 and 6 with negated codes.
_GOLD_LAYOUT = {
    SKY: {
        0: {2: GRIFFIN, 5: DRAGON, 9: GRIFFIN},
        1: {f: SYLPH for f in (0, 2, 4, 6, 8, 10)},
    },
    GROUND: {
        0: {
            0: OLIPHANT,
            1: UNICORN,
            2: HERO,
            3: THIEF,
            4: CLERIC,
            5: MAGE,
            6: KING,
            7: PALADIN,
            8: THIEF,
            9: HERO,
            10: UNICORN,
            11: OLIPHANT,
        },
        1: {f: WARRIOR for f in range(N_FILES)},
    },
    UNDERWORLD: {
        0: {2: BASILISK, 5: ELEMENTAL, 9: BASILISK},
        1: {f: DWARF for f in (1, 3, 5, 7, 9, 11)},
    },
}


def initial_position() -> Position:
    """The canonical starting position, Gold to move."""
    pos = empty_position()
    for level, ranks in _GOLD_LAYOUT.items():
        for rank, files in ranks.items():
            for file, kind in files.items():
                pos.cells[square_index(level, rank, file)] = kind
                pos.cells[square_index(level, N_RANKS - 1 - rank, file)] = -kind
    return pos


def _validate_legal(position: Position, move: Move) -> None:
    from .movegen import legal_moves  # local import: movegen builds on this module

    for m in legal_moves(position).moves:
        if (
            m.from_sq == move.from_sq
            and m.to_sq == move.to_sq
            and m.kind == move.kind
        ):
            return
    raise ContractViolation(f"move {move} is not legal in this position")


def apply_move_in_place(position: Position, move: Move) -> None:
    """Hot-path mutation; agrees bit-for-bit with :func:`apply_move`."""
    cells = position.cells
    mover = cells[move.from_sq]
    if move.kind == MoveKind.REMOTE_CAPTURE:
        cells[move.to_sq] = 0
    elif move.kind == MoveKind.PROMOTION:
        cells[move.to_sq] = move.promoted_to
        cells[move.from_sq] = 0
    else:
        cells[move.to_sq] = mover
        cells[move.from_sq] = 0
    if move.captured != 0 or abs(int(mover)) == WARRIOR:
        position.halfmove_clock_for_draw = 0
    else:
        position.halfmove_clock_for_draw += 1
    position.side_to_move = -position.side_to_move
    position.ply_count += 1


def undo_move_in_place(position: Position, move: Move) -> None:
    """Exact inverse of :func:`apply_move_in_place`."""
    cells = position.cells
    if move.kind == MoveKind.REMOTE_CAPTURE:
        cells[move.to_sq] = move.captured
    elif move.kind == MoveKind.PROMOTION:
        sign = 1 if cells[move.to_sq] > 0 else -1
        cells[move.from_sq] = sign * WARRIOR
        cells[move.to_sq] = move.captured
    else:
        cells[move.from_sq] = cells[move.to_sq]
        cells[move.to_sq] = move.captured
    position.halfmove_clock_for_draw = move.quiet_clock
    position.side_to_move = -position.side_to_move
    position.ply_count -= 1


def apply_move(position: Position, move: Move, validate: bool = False) -> Position:
    """Successor position after ``move``; the input is left untouched.

    The caller guarantees legality; pass ``validate=True`` to have it checked
    (slow, intended for debugging and the service edge).
    """
    if validate:
        _validate_legal(position, move)
    nxt = position.copy()
    apply_move_in_place(nxt, move)
    return nxt


def undo_move(position: Position, move: Move) -> Position:
    """Invert the most recently applied move, restoring the prior position exactly."""
    if position.ply_count <= 0:
        raise ContractViolation("undo_move on a position with no moves applied")
    prev = position.copy()
    undo_move_in_place(prev, move)
    return prev


def mirror(position: Position) -> Position:
    """Reflect ranks (r <-> 7-r), flip every piece sign and the side to move.

    An involution; the starting position is a fixed point.  Used by the
    evaluation symmetry tests.
    """
    grid = position.cells.reshape(N_LEVELS, N_RANKS, N_FILES)
    return Position(
        cells=np.ascontiguousarray(-grid[:, ::-1, :]).reshape(N_CELLS),
        side_to_move=-position.side_to_move,
        ply_count=position.ply_count,
        halfmove_clock_for_draw=position.halfmove_clock_for_draw,
    )


def mirror_square(index: int) -> int:
    level, rank, file = square_of(index)
    return square_index(level, N_RANKS - 1 - rank, file)


def mirror_move(move: Move) -> Move:
    return replace(
        move,
        from_sq=mirror_square(move.from_sq),
        to_sq=mirror_square(move.to_sq),
        captured=-move.captured,
        promoted_to=-move.promoted_to,
    )


def material_signature(position: Position) -> dict[int, int]:
    """Signed piece counts per kind (gold minus scarlet)."""
    sig = {}
    for kind in KIND_NAMES:
        sig[kind] = int(np.sum(position.cells == kind)) - int(
            np.sum(position.cells == -kind)
        )
    return sig


# --- DPN text serialization -------------------------------------------------
#
# Three level blocks separated by '|', each of 8 rank rows separated by '/',
# each row 12 comma-separated signed integers; then the side letter (g|s) and
# the ply count.  Example start of the initial position:
#   0,0,2,0,0,3,0,0,0,2,0,0/0,1,0,1,...| ... g 0


def to_dpn(position: Position) -> str:
    levels = []
    for level in range(N_LEVELS):
        rows = []
        for rank in range(N_RANKS):
            base = level * CELLS_PER_LEVEL + rank * N_FILES
            rows.append(",".join(str(int(v)) for v in position.cells[base : base + N_FILES]))
        levels.append("/".join(rows))
    side = "g" if position.side_to_move == GOLD else "s"
    return f"{'|'.join(levels)} {side} {position.ply_count}"


def from_dpn(text: str) -> Position:
    parts = text.strip().split()
    if len(parts) != 3:
        raise DataError(f"DPN needs '<board> <side> <ply>', got {len(parts)} fields")
    board_text, side_text, ply_text = parts
    levels = board_text.split("|")
    if len(levels) != N_LEVELS:
        raise DataError(f"DPN board needs {N_LEVELS} level blocks, got {len(levels)}")
    cells = np.zeros(N_CELLS, dtype=np.int64)
    for level, block in enumerate(levels):
        rows = block.split("/")
        if len(rows) != N_RANKS:
            raise DataError(f"level {level}: expected {N_RANKS} rank rows, got {len(rows)}")
        for rank, row in enumerate(rows):
            fields = row.split(",")
            if len(fields) != N_FILES:
                raise DataError(
                    f"level {level} rank {rank}: expected {N_FILES} fields, got {len(fields)}"
                )
            for file, fld in enumerate(fields):
                try:
                    code = int(fld)
                except ValueError as exc:
                    raise DataError(f"bad piece code {fld!r}") from exc
                if code != 0 and not 1 <= abs(code) <= 15:
                    raise DataError(f"piece code out of range: {code}")
                cells[square_index(level, rank, file)] = code
    if side_text == "g":
        side = GOLD
    elif side_text == "s":
        side = SCARLET
    else:
        raise DataError(f"bad side letter {side_text!r}")
    try:
        ply = int(ply_text)
    except ValueError as exc:
        raise DataError(f"bad ply count {ply_text!r}") from exc
    if ply < 0:
        raise DataError(f"negative ply count {ply}")
    return Position(cells=cells, side_to_move=side, ply_count=ply)
