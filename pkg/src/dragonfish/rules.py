"""The canonical movement table for all fifteen piece kinds.

Every generator, attack probe and evaluation term in the package derives from
the action lists produced here, so this file is the single normative encoding
of the piece rules.  Geometry conventions: "forward" is +rank for Gold and
-rank for Scarlet; on-level offsets are written (drank, dfile); vertical
transitions name the destination level explicitly.

Summary of the ruleset (G=Ground, S=Sky, U=Underworld):

* Sylph      S: move 1 diagonal-forward; capture 1 straight-forward or the
              square directly below.  G: move to the square directly above or
              to any vacant own starting square (never a capture).
* Griffin    S: (3,2)/(2,3) leap; move/capture to G at (+-1,+-1).
              G: 1 diagonal step; move/capture to S at (+-1,+-1).
* Dragon     S only: bishop slide + 1 orthogonal step; remote-captures the
              G square directly below and its 4 orthogonal neighbours
              (the Dragon does not relocate).
* Warrior    G only: move 1 straight-forward, capture 1 diagonal-forward;
              promotes to Hero on the far rank.
* Oliphant   G only: rook slide.
* Unicorn    G only: (1,2) knight leap.
* Hero       G: 1 or 2 diagonal (the 2 is a leap); move/capture to S or U at
              (+-1,+-1).  S/U: only back to G at (+-1,+-1).
* Thief      G only: bishop slide.
* Cleric     any level: king step; move/capture straight up/down one level.
* Mage       G: queen slide; S/U: 1 orthogonal step; vertical straight
              up/down one level (G to either; S/U back to G).
* King       own level: king step; vertical straight up/down between G and
              S/U.
* Paladin    G: king step + knight leap; S/U: king step; all levels: 3-D
              jumps of (one level, 2 orthogonal) and (two levels,
              1 orthogonal).
* Basilisk   U only: move/capture 1 straight- or diagonal-forward; move 1
              straight back; freezes the enemy piece on the G square
              directly above it.
* Dwarf      G/U: move 1 straight-forward or sideways; capture 1
              diagonal-forward; capture straight up from U to G, straight
              down from G to U.
* Elemental  U: slide 1-2 orthogonal, move-only 1 diagonal; move/capture to
              G at (0,0) or (+-1,0)/(0,+-1); G: 1 orthogonal step and the
              symmetric return to U.
"""

from __future__ import annotations

from dataclasses import dataclass

from .board import (
    BASILISK,
    CLERIC,
    DRAGON,
    DWARF,
    ELEMENTAL,
    GOLD,
    GRIFFIN,
    GROUND,
    HERO,
    KING,
    KIND_LEVELS,
    KIND_NAMES,
    MAGE,
    N_FILES,
    N_RANKS,
    OLIPHANT,
    PALADIN,
    SKY,
    SYLPH,
    THIEF,
    UNDERWORLD,
    UNICORN,
    WARRIOR,
    square_index,
)

ORTHO = ((1, 0), (-1, 0), (0, 1), (0, -1))
DIAG = ((1, 1), (1, -1), (-1, 1), (-1, -1))
KING_STEPS = ORTHO + DIAG
KNIGHT_LEAPS = ((1, 2), (1, -2), (-1, 2), (-1, -2), (2, 1), (2, -1), (-2, 1), (-2, -1))
GRIFFIN_LEAPS = ((3, 2), (3, -2), (-3, 2), (-3, -2), (2, 3), (2, -3), (-2, 3), (-2, -3))

# Sylph starting files (their Sky home squares, rank 1 for Gold / 6 for Scarlet).
SYLPH_START_FILES = (0, 2, 4, 6, 8, 10)


@dataclass(frozen=True)
class Step:
    """A single-square action.  ``blocker`` (if >= 0) must be empty for the
    step to be available; ``remote`` marks a capture where the mover stays."""

    to_sq: int
    can_move: bool
    can_capture: bool
    remote: bool = False
    blocker: int = -1


def _in_board(rank: int, file: int) -> bool:
    return 0 <= rank < N_RANKS and 0 <= file < N_FILES


def piece_actions(kind: int, color: int, level: int, rank: int, file: int):
    """All actions of one piece standing on (level, rank, file).

    Returns ``(steps, rays)`` where ``steps`` is a list of :class:`Step` and
    ``rays`` a list of square-index lists walked outward until the board edge
    (sliding semantics: stop at the first occupied square, capture if enemy).
    Squares on levels the kind can never occupy yield no actions.
    """
    if level not in KIND_LEVELS[kind]:
        return [], []

    fwd = 1 if color == GOLD else -1
    steps: list[Step] = []
    rays: list[list[int]] = []

    def add(to_level, to_rank, to_file, move=True, capture=True, remote=False, blocker=-1):
        if 0 <= to_level < 3 and _in_board(to_rank, to_file):
            steps.append(
                Step(square_index(to_level, to_rank, to_file), move, capture, remote, blocker)
            )

    def ray(d_rank, d_file):
        squares = []
        r, f = rank + d_rank, file + d_file
        while _in_board(r, f):
            squares.append(square_index(level, r, f))
            r += d_rank
            f += d_file
        if squares:
            rays.append(squares)

    if kind == SYLPH:
        if level == SKY:
            add(SKY, rank + fwd, file - 1, move=True, capture=False)
            add(SKY, rank + fwd, file + 1, move=True, capture=False)
            add(SKY, rank + fwd, file, move=False, capture=True)
            add(GROUND, rank, file, move=False, capture=True)
        else:  # GROUND
            add(SKY, rank, file, move=True, capture=False)
            home_rank = 1 if color == GOLD else N_RANKS - 2
            for start_file in SYLPH_START_FILES:
                add(SKY, home_rank, start_file, move=True, capture=False)

    elif kind == GRIFFIN:
        if level == SKY:
            for dr, df in GRIFFIN_LEAPS:
                add(SKY, rank + dr, file + df)
            for dr, df in DIAG:
                add(GROUND, rank + dr, file + df)
        else:  # GROUND
            for dr, df in DIAG:
                add(GROUND, rank + dr, file + df)
                add(SKY, rank + dr, file + df)

    elif kind == DRAGON:
        for dr, df in DIAG:
            ray(dr, df)
        for dr, df in ORTHO:
            add(SKY, rank + dr, file + df)
        add(GROUND, rank, file, move=False, capture=True, remote=True)
        for dr, df in ORTHO:
            add(GROUND, rank + dr, file + df, move=False, capture=True, remote=True)

    elif kind == WARRIOR:
        add(GROUND, rank + fwd, file, move=True, capture=False)
        add(GROUND, rank + fwd, file - 1, move=False, capture=True)
        add(GROUND, rank + fwd, file + 1, move=False, capture=True)

    elif kind == OLIPHANT:
        for dr, df in ORTHO:
            ray(dr, df)

    elif kind == UNICORN:
        for dr, df in KNIGHT_LEAPS:
            add(GROUND, rank + dr, file + df)

    elif kind == HERO:
        if level == GROUND:
            for dr, df in DIAG:
                add(GROUND, rank + dr, file + df)
                add(GROUND, rank + 2 * dr, file + 2 * df)  # leap, not a slide
                add(SKY, rank + dr, file + df)
                add(UNDERWORLD, rank + dr, file + df)
        else:  # SKY or UNDERWORLD: only back to Ground
            for dr, df in DIAG:
                add(GROUND, rank + dr, file + df)

    elif kind == THIEF:
        for dr, df in DIAG:
            ray(dr, df)

    elif kind == CLERIC:
        for dr, df in KING_STEPS:
            add(level, rank + dr, file + df)
        add(level - 1, rank, file)
        add(level + 1, rank, file)

    elif kind == MAGE:
        if level == GROUND:
            for dr, df in KING_STEPS:
                ray(dr, df)
            add(SKY, rank, file)
            add(UNDERWORLD, rank, file)
        else:  # SKY or UNDERWORLD: severely restricted
            for dr, df in ORTHO:
                add(level, rank + dr, file + df)
            add(GROUND, rank, file)

    elif kind == KING:
        for dr, df in KING_STEPS:
            add(level, rank + dr, file + df)
        if level == GROUND:
            add(SKY, rank, file)
            add(UNDERWORLD, rank, file)
        else:
            add(GROUND, rank, file)

    elif kind == PALADIN:
        for dr, df in KING_STEPS:
            add(level, rank + dr, file + df)
        if level == GROUND:
            for dr, df in KNIGHT_LEAPS:
                add(GROUND, rank + dr, file + df)
        # 3-D knight jumps from any level.
        for d_level in (-1, 1):
            for dr, df in ((2, 0), (-2, 0), (0, 2), (0, -2)):
                add(level + d_level, rank + dr, file + df)
        for d_level in (-2, 2):
            for dr, df in ORTHO:
                add(level + d_level, rank + dr, file + df)

    elif kind == BASILISK:
        add(UNDERWORLD, rank + fwd, file)
        add(UNDERWORLD, rank + fwd, file - 1)
        add(UNDERWORLD, rank + fwd, file + 1)
        add(UNDERWORLD, rank - fwd, file, move=True, capture=False)

    elif kind == DWARF:
        add(level, rank + fwd, file, move=True, capture=False)
        add(level, rank, file - 1, move=True, capture=False)
        add(level, rank, file + 1, move=True, capture=False)
        add(level, rank + fwd, file - 1, move=False, capture=True)
        add(level, rank + fwd, file + 1, move=False, capture=True)
        if level == UNDERWORLD:
            add(GROUND, rank, file, move=False, capture=True)
        else:  # GROUND
            add(UNDERWORLD, rank, file, move=False, capture=True)

    elif kind == ELEMENTAL:
        if level == UNDERWORLD:
            for dr, df in ORTHO:
                add(UNDERWORLD, rank + dr, file + df)
                if _in_board(rank + dr, file + df):
                    add(
                        UNDERWORLD,
                        rank + 2 * dr,
                        file + 2 * df,
                        blocker=square_index(UNDERWORLD, rank + dr, file + df),
                    )
            for dr, df in DIAG:
                add(UNDERWORLD, rank + dr, file + df, move=True, capture=False)
            add(GROUND, rank, file)
            for dr, df in ORTHO:
                add(GROUND, rank + dr, file + df)
        else:  # GROUND
            for dr, df in ORTHO:
                add(GROUND, rank + dr, file + df)
            add(UNDERWORLD, rank, file)
            for dr, df in ORTHO:
                add(UNDERWORLD, rank + dr, file + df)

    else:
        raise ValueError(f"unknown piece kind {kind}")

    # Merge duplicate targets (e.g. a Ground Sylph standing under one of its
    # own starting squares reaches it via two rules).
    merged: dict[tuple[int, bool, int], Step] = {}
    for s in steps:
        key = (s.to_sq, s.remote, s.blocker)
        prev = merged.get(key)
        if prev is None:
            merged[key] = s
        else:
            merged[key] = Step(
                s.to_sq,
                prev.can_move or s.can_move,
                prev.can_capture or s.can_capture,
                s.remote,
                s.blocker,
            )
    return list(merged.values()), rays


def promotion_rank(color: int) -> int:
    return N_RANKS - 1 if color == GOLD else 0


def is_promotion_square(kind: int, color: int, to_sq: int) -> bool:
    """Warriors promote (to Hero) when they reach the far rank."""
    if kind != WARRIOR:
        return False
    rank = to_sq % (N_RANKS * N_FILES) // N_FILES
    return rank == promotion_rank(color)


__all__ = [
    "Step",
    "piece_actions",
    "promotion_rank",
    "is_promotion_square",
    "ORTHO",
    "DIAG",
    "KING_STEPS",
    "KNIGHT_LEAPS",
    "GRIFFIN_LEAPS",
    "SYLPH_START_FILES",
    "KIND_NAMES",
]
