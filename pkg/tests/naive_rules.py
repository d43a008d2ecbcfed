"""Independent naive rule oracle used by the generator-equivalence tests.

Deliberately written as a from/to pair predicate over plain Python lists with
its own attack and legality logic, sharing no code with the package's
table-driven generator.  Slow by design.
"""

from __future__ import annotations

from dragonfish.board import GOLD, Move, MoveKind, Position

SKY, GROUND, UNDER = 0, 1, 2

SYLPH_START_FILES = (0, 2, 4, 6, 8, 10)


def lrf(sq):
    return sq // 96, sq % 96 // 12, sq % 12


def idx(level, rank, file):
    return level * 96 + rank * 12 + file


def _clear_line(board, fl, fr, ff, tr, tf):
    """All squares strictly between two same-level squares on a line are empty."""
    dr = (tr > fr) - (tr < fr)
    df = (tf > ff) - (tf < ff)
    r, f = fr + dr, ff + df
    while (r, f) != (tr, tf):
        if board[idx(fl, r, f)] != 0:
            return False
        r += dr
        f += df
    return True


def pair_action(board, color, from_sq, to_sq):
    """What the piece on ``from_sq`` may do onto ``to_sq``.

    Returns ``(can_move, can_capture, remote)`` or None, with slide paths and
    the Elemental's two-step blocker already resolved against the board.
    """
    if from_sq == to_sq:
        return None
    piece = board[from_sq]
    kind = abs(piece)
    fl, fr, ff = lrf(from_sq)
    tl, tr, tf = lrf(to_sq)
    dr, df = tr - fr, tf - ff
    fwd = 1 if color == GOLD else -1

    if kind == 1:  # Sylph
        if fl == SKY:
            if tl == SKY and dr == fwd and abs(df) == 1:
                return (True, False, False)
            if tl == SKY and dr == fwd and df == 0:
                return (False, True, False)
            if tl == GROUND and dr == 0 and df == 0:
                return (False, True, False)
        elif fl == GROUND:
            home = 1 if color == GOLD else 6
            if tl == SKY and dr == 0 and df == 0:
                return (True, False, False)
            if tl == SKY and tr == home and tf in SYLPH_START_FILES:
                return (True, False, False)
        return None

    if kind == 2:  # Griffin
        if fl == SKY:
            if tl == SKY and {abs(dr), abs(df)} == {2, 3}:
                return (True, True, False)
            if tl == GROUND and abs(dr) == 1 and abs(df) == 1:
                return (True, True, False)
        elif fl == GROUND:
            if tl in (GROUND, SKY) and abs(dr) == 1 and abs(df) == 1:
                return (True, True, False)
        return None

    if kind == 3:  # Dragon
        if fl != SKY:
            return None
        if tl == SKY:
            if abs(dr) == abs(df) > 0 and _clear_line(board, fl, fr, ff, tr, tf):
                return (True, True, False)
            if abs(dr) + abs(df) == 1:
                return (True, True, False)
        if tl == GROUND and abs(dr) + abs(df) <= 1:
            return (False, True, True)
        return None

    if kind == 4:  # Warrior
        if fl == GROUND and tl == GROUND and dr == fwd:
            if df == 0:
                return (True, False, False)
            if abs(df) == 1:
                return (False, True, False)
        return None

    if kind == 5:  # Oliphant
        if fl == GROUND and tl == GROUND and (dr == 0) != (df == 0):
            if _clear_line(board, fl, fr, ff, tr, tf):
                return (True, True, False)
        return None

    if kind == 6:  # Unicorn
        if fl == GROUND and tl == GROUND and {abs(dr), abs(df)} == {1, 2}:
            return (True, True, False)
        return None

    if kind == 7:  # Hero
        if fl == GROUND:
            if tl == GROUND and abs(dr) == abs(df) in (1, 2):
                return (True, True, False)
            if tl in (SKY, UNDER) and abs(dr) == 1 and abs(df) == 1:
                return (True, True, False)
        else:
            if tl == GROUND and abs(dr) == 1 and abs(df) == 1:
                return (True, True, False)
        return None

    if kind == 8:  # Thief
        if fl == GROUND and tl == GROUND and abs(dr) == abs(df) > 0:
            if _clear_line(board, fl, fr, ff, tr, tf):
                return (True, True, False)
        return None

    if kind == 9:  # Cleric
        if tl == fl and max(abs(dr), abs(df)) == 1:
            return (True, True, False)
        if abs(tl - fl) == 1 and dr == 0 and df == 0:
            return (True, True, False)
        return None

    if kind == 10:  # Mage
        if fl == GROUND:
            if tl == GROUND and (abs(dr) == abs(df) > 0 or (dr == 0) != (df == 0)):
                if _clear_line(board, fl, fr, ff, tr, tf):
                    return (True, True, False)
            if tl in (SKY, UNDER) and dr == 0 and df == 0:
                return (True, True, False)
        else:
            if tl == fl and abs(dr) + abs(df) == 1:
                return (True, True, False)
            if tl == GROUND and dr == 0 and df == 0:
                return (True, True, False)
        return None

    if kind == 11:  # King
        if tl == fl and max(abs(dr), abs(df)) == 1:
            return (True, True, False)
        if dr == 0 and df == 0 and (fl == GROUND) != (tl == GROUND):
            return (True, True, False)
        return None

    if kind == 12:  # Paladin
        if tl == fl and max(abs(dr), abs(df)) == 1:
            return (True, True, False)
        if fl == GROUND and tl == GROUND and {abs(dr), abs(df)} == {1, 2}:
            return (True, True, False)
        if abs(tl - fl) == 1 and ((abs(dr) == 2 and df == 0) or (dr == 0 and abs(df) == 2)):
            return (True, True, False)
        if abs(tl - fl) == 2 and abs(dr) + abs(df) == 1:
            return (True, True, False)
        return None

    if kind == 13:  # Basilisk
        if fl == UNDER and tl == UNDER:
            if dr == fwd and abs(df) <= 1:
                return (True, True, False)
            if dr == -fwd and df == 0:
                return (True, False, False)
        return None

    if kind == 14:  # Dwarf
        if tl == fl:
            if (dr == fwd and df == 0) or (dr == 0 and abs(df) == 1):
                return (True, False, False)
            if dr == fwd and abs(df) == 1:
                return (False, True, False)
        if dr == 0 and df == 0:
            if fl == UNDER and tl == GROUND:
                return (False, True, False)
            if fl == GROUND and tl == UNDER:
                return (False, True, False)
        return None

    if kind == 15:  # Elemental
        if fl == UNDER:
            if tl == UNDER:
                if abs(dr) + abs(df) == 1:
                    return (True, True, False)
                if (dr == 0) != (df == 0) and abs(dr) + abs(df) == 2:
                    mid = idx(UNDER, fr + dr // 2, ff + df // 2)
                    if board[mid] == 0:
                        return (True, True, False)
                if abs(dr) == 1 and abs(df) == 1:
                    return (True, False, False)
            if tl == GROUND and abs(dr) + abs(df) <= 1:
                return (True, True, False)
        elif fl == GROUND:
            if tl == GROUND and abs(dr) + abs(df) == 1:
                return (True, True, False)
            if tl == UNDER and abs(dr) + abs(df) <= 1:
                return (True, True, False)
        return None

    return None


def frozen(board, sq):
    piece = board[sq]
    if piece == 0 or not 96 <= sq < 192:
        return False
    return board[sq + 96] == (-13 if piece > 0 else 13)


def attacked_by(board, sq, by):
    """Any piece of ``by`` (not frozen) with a capture-capable pair onto ``sq``."""
    for frm in range(288):
        piece = board[frm]
        if piece == 0 or (piece > 0) != (by == GOLD):
            continue
        if frozen(board, frm):
            continue
        act = pair_action(board, by, frm, sq)
        if act is not None and act[1]:
            return True
    return False


def king_square(board, color):
    code = 11 * color
    for sq in range(288):
        if board[sq] == code:
            return sq
    return -1


def oracle_pseudo_moves(board, color):
    """(from, to, kind, captured) tuples from full 288x288 pair enumeration."""
    out = []
    promo_rank = 7 if color == GOLD else 0
    for frm in range(288):
        piece = board[frm]
        if piece == 0 or (piece > 0) != (color == GOLD):
            continue
        if frozen(board, frm):
            continue
        for to in range(288):
            act = pair_action(board, color, frm, to)
            if act is None:
                continue
            can_move, can_capture, remote = act
            target = board[to]
            own = target != 0 and (target > 0) == (color == GOLD)
            if remote:
                if target != 0 and not own:
                    out.append((frm, to, 1, target))
                continue
            promo = abs(piece) == 4 and to % 96 // 12 == promo_rank
            kind = 2 if promo else 0
            if target == 0:
                if can_move:
                    out.append((frm, to, kind, 0))
            elif not own and can_capture:
                out.append((frm, to, kind, target))
    return out


def _apply(board, frm, to, kind, color):
    nxt = list(board)
    if kind == 1:
        nxt[to] = 0
    elif kind == 2:
        nxt[to] = 7 * color
        nxt[frm] = 0
    else:
        nxt[to] = nxt[frm]
        nxt[frm] = 0
    return nxt


def oracle_legal_moves(position: Position):
    """Legal moves as Move objects, sorted like the fast generator's output."""
    board = [int(v) for v in position.cells]
    color = position.side_to_move
    moves = []
    for frm, to, kind, captured in oracle_pseudo_moves(board, color):
        nxt = _apply(board, frm, to, kind, color)
        ksq = king_square(nxt, color)
        if ksq >= 0 and attacked_by(nxt, ksq, -color):
            continue
        moves.append(
            Move(
                from_sq=frm,
                to_sq=to,
                kind=MoveKind(kind),
                captured=captured,
                promoted_to=7 * color if kind == 2 else 0,
                quiet_clock=position.halfmove_clock_for_draw,
            )
        )
    moves.sort(key=Move.sort_key)
    return moves


def oracle_perft(position: Position, depth: int) -> int:
    if depth == 0:
        return 1
    board = [int(v) for v in position.cells]
    return _perft(board, position.side_to_move, depth)


def _perft(board, color, depth):
    moves = []
    for frm, to, kind, captured in oracle_pseudo_moves(board, color):
        nxt = _apply(board, frm, to, kind, color)
        ksq = king_square(nxt, color)
        if ksq >= 0 and attacked_by(nxt, ksq, -color):
            continue
        moves.append(nxt)
    if depth == 1:
        return len(moves)
    return sum(_perft(nxt, -color, depth - 1) for nxt in moves)
