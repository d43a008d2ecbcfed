"""Flat numpy lookup tables compiled from the movement rules.

Everything the jitted kernels need is packed into one tuple of arrays
(:data:`TABLES`) and passed as an argument, which keeps the kernels cacheable
and the rule data swappable in tests.  Index scheme:

* generation tables: ``key = (color_idx*16 + kind)*288 + square`` with
  color_idx 0 for Gold, 1 for Scarlet;
* reverse attack tables: ``rkey = color_idx*288 + target_square`` listing the
  (from, kind, blocker) step/leap/remote vectors of that color onto the
  target; sliders are resolved by ray scans instead;
* direction rays: ``sq*8 + d`` with d 0..3 orthogonal, 4..7 diagonal, squares
  ordered walking outward on the square's own level.
"""

from __future__ import annotations

import numpy as np

from .board import (
    BASILISK,
    CLERIC,
    DRAGON,
    DWARF,
    ELEMENTAL,
    GOLD,
    GRIFFIN,
    HERO,
    KING,
    MAGE,
    N_CELLS,
    N_FILES,
    N_RANKS,
    OLIPHANT,
    PALADIN,
    SCARLET,
    SYLPH,
    THIEF,
    UNICORN,
    WARRIOR,
    square_index,
    square_of,
)
from .rules import DIAG, ORTHO, piece_actions

FLAG_MOVE = 1
FLAG_CAPTURE = 2
FLAG_REMOTE = 4

N_KINDS = 16  # index 0 unused

# Baseline centipawn values per kind (the chess-derived mapping; Griffin,
# Paladin and Elemental take the nearest movement-class analogue).
BASE_VALUES = np.zeros(N_KINDS, dtype=np.float64)
BASE_VALUES[SYLPH] = 100.0
BASE_VALUES[GRIFFIN] = 320.0
BASE_VALUES[DRAGON] = 900.0
BASE_VALUES[WARRIOR] = 100.0
BASE_VALUES[OLIPHANT] = 500.0
BASE_VALUES[UNICORN] = 320.0
BASE_VALUES[HERO] = 500.0
BASE_VALUES[THIEF] = 500.0
BASE_VALUES[CLERIC] = 330.0
BASE_VALUES[MAGE] = 330.0
BASE_VALUES[KING] = 20000.0
BASE_VALUES[PALADIN] = 500.0
BASE_VALUES[BASILISK] = 320.0
BASE_VALUES[DWARF] = 100.0
BASE_VALUES[ELEMENTAL] = 320.0

# Chess table class per kind for the piece-square bonus:
# 0 pawn, 1 knight, 2 bishop, 3 rook, 4 queen, 5 king, -1 unmapped.
PSQT_CLASS = np.full(N_KINDS, -1, dtype=np.int8)
for _kind, _cls in (
    (SYLPH, 0),
    (WARRIOR, 0),
    (DWARF, 0),
    (UNICORN, 1),
    (BASILISK, 1),
    (CLERIC, 2),
    (MAGE, 2),
    (HERO, 3),
    (THIEF, 3),
    (OLIPHANT, 3),
    (DRAGON, 4),
    (KING, 5),
):
    PSQT_CLASS[_kind] = _cls


def _build():
    n_keys = 2 * N_KINDS * N_CELLS

    step_start = np.zeros(n_keys, dtype=np.int32)
    step_end = np.zeros(n_keys, dtype=np.int32)
    step_to: list[int] = []
    step_flags: list[int] = []
    step_block: list[int] = []

    ray_start = np.zeros(n_keys, dtype=np.int32)
    ray_end = np.zeros(n_keys, dtype=np.int32)
    ray_sq_start: list[int] = []
    ray_sq_end: list[int] = []
    ray_sq: list[int] = []

    slc_start = np.zeros(n_keys, dtype=np.int32)
    slc_end = np.zeros(n_keys, dtype=np.int32)
    slc_to: list[int] = []
    slc_block: list[int] = []

    # reverse capture vectors, bucketed per (color, target)
    rev: list[list[tuple[int, int, int]]] = [[] for _ in range(2 * N_CELLS)]

    for cidx, color in enumerate((GOLD, SCARLET)):
        for kind in range(1, N_KINDS):
            for sq in range(N_CELLS):
                level, rank, file = square_of(sq)
                steps, rays = piece_actions(kind, color, level, rank, file)
                key = (cidx * N_KINDS + kind) * N_CELLS + sq

                step_start[key] = len(step_to)
                for s in steps:
                    flags = 0
                    if s.can_move:
                        flags |= FLAG_MOVE
                    if s.can_capture:
                        flags |= FLAG_CAPTURE
                    if s.remote:
                        flags |= FLAG_REMOTE
                    step_to.append(s.to_sq)
                    step_flags.append(flags)
                    step_block.append(s.blocker)
                    if s.can_capture:
                        rev[cidx * N_CELLS + s.to_sq].append((sq, kind, s.blocker))
                step_end[key] = len(step_to)

                ray_start[key] = len(ray_sq_start)
                for squares in rays:
                    ray_sq_start.append(len(ray_sq))
                    ray_sq.extend(squares)
                    ray_sq_end.append(len(ray_sq))
                ray_end[key] = len(ray_sq_start)

                # same-level capture steps (vertical vectors and remote
                # captures are deliberately excluded: threat/space terms)
                slc_start[key] = len(slc_to)
                for s in steps:
                    if s.can_capture and not s.remote and s.to_sq // 96 == level:
                        slc_to.append(s.to_sq)
                        slc_block.append(s.blocker)
                slc_end[key] = len(slc_to)

    att_start = np.zeros(2 * N_CELLS, dtype=np.int32)
    att_end = np.zeros(2 * N_CELLS, dtype=np.int32)
    att_from: list[int] = []
    att_kind: list[int] = []
    att_block: list[int] = []
    for rkey in range(2 * N_CELLS):
        att_start[rkey] = len(att_from)
        for frm, kind, blocker in rev[rkey]:
            att_from.append(frm)
            att_kind.append(kind)
            att_block.append(blocker)
        att_end[rkey] = len(att_from)

    # per-square direction rays on the square's own level
    dir_start = np.zeros(N_CELLS * 8, dtype=np.int32)
    dir_end = np.zeros(N_CELLS * 8, dtype=np.int32)
    dir_sq: list[int] = []
    directions = ORTHO + DIAG
    for sq in range(N_CELLS):
        level, rank, file = square_of(sq)
        for d, (dr, df) in enumerate(directions):
            dir_start[sq * 8 + d] = len(dir_sq)
            r, f = rank + dr, file + df
            while 0 <= r < N_RANKS and 0 <= f < N_FILES:
                dir_sq.append(square_index(level, r, f))
                r += dr
                f += df
            dir_end[sq * 8 + d] = len(dir_sq)

    as_i32 = lambda xs: np.asarray(xs, dtype=np.int32)
    return (
        step_start,
        step_end,
        as_i32(step_to),
        np.asarray(step_flags, dtype=np.int8),
        as_i32(step_block),
        ray_start,
        ray_end,
        as_i32(ray_sq_start),
        as_i32(ray_sq_end),
        as_i32(ray_sq),
        slc_start,
        slc_end,
        as_i32(slc_to),
        as_i32(slc_block),
        att_start,
        att_end,
        as_i32(att_from),
        np.asarray(att_kind, dtype=np.int8),
        as_i32(att_block),
        dir_start,
        dir_end,
        as_i32(dir_sq),
        BASE_VALUES,
        PSQT_CLASS,
    )


TABLES = _build()
