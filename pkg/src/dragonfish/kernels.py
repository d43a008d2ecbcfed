"""Jitted hot-path kernels: move generation, attack probes, evaluation, search.

All kernels operate on the flat int64 cell array and take the rule tables as
an explicit tuple argument (see :mod:`dragonfish.tables`), which keeps them
cacheable across processes.  Set ``NUMBA_DISABLE_JIT=1`` to run them as plain
Python for debugging; results are identical, only slower.
"""

from __future__ import annotations

import numpy as np
from numba import njit

MOVE_BUF_ROWS = 2048
MATE_VALUE = 1.0e9

# move-kind codes inside kernel buffers
MK_NORMAL = 0
MK_REMOTE = 1
MK_PROMOTION = 2


@njit(cache=True)
def is_attacked(board, target, by_color, T):
    """True iff any piece of ``by_color`` has a pseudo-legal capture onto
    ``target``.  Frozen pieces (Ground piece above an enemy Basilisk) attack
    nothing."""
    att_start = T[14]
    att_end = T[15]
    att_from = T[16]
    att_kind = T[17]
    att_block = T[18]
    dir_start = T[19]
    dir_end = T[20]
    dir_sq = T[21]

    cidx = 0 if by_color > 0 else 1
    rkey = cidx * 288 + target
    for i in range(att_start[rkey], att_end[rkey]):
        frm = att_from[i]
        if board[frm] != by_color * att_kind[i]:
            continue
        blk = att_block[i]
        if blk >= 0 and board[blk] != 0:
            continue
        if 96 <= frm < 192 and board[frm + 96] == -by_color * 13:
            continue
        return True

    level = target // 96
    if level == 2:
        return False
    for d in range(8):
        if level == 0 and d < 4:
            continue  # Sky has no orthogonal sliders
        base = target * 8 + d
        for j in range(dir_start[base], dir_end[base]):
            sq = dir_sq[j]
            p = board[sq]
            if p == 0:
                continue
            if p * by_color > 0:
                k = p if p > 0 else -p
                if level == 0:
                    hit = k == 3  # Dragon on the diagonals
                elif d < 4:
                    hit = k == 5 or k == 10  # Oliphant / Mage on Ground files+ranks
                else:
                    hit = k == 8 or k == 10  # Thief / Mage on Ground diagonals
                if hit and not (96 <= sq < 192 and board[sq + 96] == -by_color * 13):
                    return True
            break
    return False


@njit(cache=True)
def find_king(board, color):
    target = 11 * color
    for sq in range(288):
        if board[sq] == target:
            return sq
    return -1


@njit(cache=True)
def gen_pseudo(board, color, out, T):
    """Pseudo-legal moves of ``color`` into ``out`` rows of
    (from, to, kind, captured); returns the row count.  Frozen pieces emit
    nothing; Warrior far-rank arrivals come out as promotions."""
    step_start = T[0]
    step_end = T[1]
    step_to = T[2]
    step_flags = T[3]
    step_block = T[4]
    ray_start = T[5]
    ray_end = T[6]
    ray_sq_start = T[7]
    ray_sq_end = T[8]
    ray_sq = T[9]

    cidx = 0 if color > 0 else 1
    promo_rank = 7 if color > 0 else 0
    n = 0
    for frm in range(288):
        p = board[frm]
        if p == 0 or p * color < 0:
            continue
        if 96 <= frm < 192 and board[frm + 96] == -color * 13:
            continue
        k = p if p > 0 else -p
        key = (cidx * 16 + k) * 288 + frm
        for i in range(step_start[key], step_end[key]):
            to = step_to[i]
            flags = step_flags[i]
            blk = step_block[i]
            if blk >= 0 and board[blk] != 0:
                continue
            t = board[to]
            if flags & 4:  # remote capture: mover stays
                if t * color < 0:
                    out[n, 0] = frm
                    out[n, 1] = to
                    out[n, 2] = MK_REMOTE
                    out[n, 3] = t
                    n += 1
                continue
            if t == 0:
                if flags & 1:
                    mk = MK_PROMOTION if (k == 4 and to % 96 // 12 == promo_rank) else MK_NORMAL
                    out[n, 0] = frm
                    out[n, 1] = to
                    out[n, 2] = mk
                    out[n, 3] = 0
                    n += 1
            elif t * color < 0:
                if flags & 2:
                    mk = MK_PROMOTION if (k == 4 and to % 96 // 12 == promo_rank) else MK_NORMAL
                    out[n, 0] = frm
                    out[n, 1] = to
                    out[n, 2] = mk
                    out[n, 3] = t
                    n += 1
        for r in range(ray_start[key], ray_end[key]):
            for j in range(ray_sq_start[r], ray_sq_end[r]):
                to = ray_sq[j]
                t = board[to]
                if t == 0:
                    out[n, 0] = frm
                    out[n, 1] = to
                    out[n, 2] = MK_NORMAL
                    out[n, 3] = 0
                    n += 1
                elif t * color < 0:
                    out[n, 0] = frm
                    out[n, 1] = to
                    out[n, 2] = MK_NORMAL
                    out[n, 3] = t
                    n += 1
                    break
                else:
                    break
    return n


@njit(cache=True)
def _apply_raw(board, frm, to, mk, color):
    """Mutate cells for one move; returns (captured, mover) for :func:`_undo_raw`."""
    p = board[frm]
    cap = board[to]
    if mk == MK_REMOTE:
        board[to] = 0
    elif mk == MK_PROMOTION:
        board[to] = 7 * color
        board[frm] = 0
    else:
        board[to] = p
        board[frm] = 0
    return cap, p


@njit(cache=True)
def _undo_raw(board, frm, to, mk, cap, p):
    if mk == MK_REMOTE:
        board[to] = cap
    else:
        board[frm] = p
        board[to] = cap


@njit(cache=True)
def gen_legal(board, color, out, T):
    """Legal moves: pseudo-legal minus anything leaving the own King attacked."""
    n = gen_pseudo(board, color, out, T)
    ksq = find_king(board, color)
    if ksq < 0:
        return n  # kingless test positions: nothing to protect
    m = 0
    for i in range(n):
        frm = out[i, 0]
        to = out[i, 1]
        mk = out[i, 2]
        cap, p = _apply_raw(board, frm, to, mk, color)
        probe = to if (frm == ksq and mk != MK_REMOTE) else ksq
        ok = not is_attacked(board, probe, -color, T)
        _undo_raw(board, frm, to, mk, cap, p)
        if ok:
            out[m, 0] = frm
            out[m, 1] = to
            out[m, 2] = mk
            out[m, 3] = cap
            m += 1
    return m


@njit(cache=True)
def has_legal_move(board, color, T):
    buf = np.empty((MOVE_BUF_ROWS, 4), dtype=np.int64)
    n = gen_pseudo(board, color, buf, T)
    ksq = find_king(board, color)
    if ksq < 0:
        return n > 0
    for i in range(n):
        frm = buf[i, 0]
        to = buf[i, 1]
        mk = buf[i, 2]
        cap, p = _apply_raw(board, frm, to, mk, color)
        probe = to if (frm == ksq and mk != MK_REMOTE) else ksq
        ok = not is_attacked(board, probe, -color, T)
        _undo_raw(board, frm, to, mk, cap, p)
        if ok:
            return True
    return False


@njit(cache=True)
def terminal_code(board, color, quiet_clock, ply, T):
    """0 ongoing, 1 Gold wins, 2 Scarlet wins, 3 draw, for ``color`` to move."""
    if ply >= 600:
        return 3
    if quiet_clock >= 100:
        return 3
    if has_legal_move(board, color, T):
        return 0
    ksq = find_king(board, color)
    if ksq >= 0 and is_attacked(board, ksq, -color, T):
        return 2 if color > 0 else 1  # side to move is checkmated
    return 3


@njit(cache=True)
def perft_count(board, color, depth, T):
    """Leaf count of the legal-move tree (the draw clocks play no part).

    Iterative with an explicit frame stack: numba's on-disk cache cannot cope
    with self-recursive jitted functions.
    """
    if depth <= 0:
        return np.int64(1)
    moves = np.empty((depth, MOVE_BUF_ROWS, 4), dtype=np.int64)
    counts = np.zeros(depth, dtype=np.int64)
    index = np.zeros(depth, dtype=np.int64)
    undo = np.zeros((depth, 5), dtype=np.int64)  # frm, to, mk, cap, mover

    total = np.int64(0)
    level = 0
    counts[0] = gen_legal(board, color, moves[0], T)
    index[0] = 0
    while level >= 0:
        side = color if level % 2 == 0 else -color
        if level == depth - 1:
            total += counts[level]
            index[level] = counts[level]
        if index[level] >= counts[level]:
            level -= 1
            if level >= 0:
                _undo_raw(board, undo[level, 0], undo[level, 1], undo[level, 2], undo[level, 3], undo[level, 4])
            continue
        i = index[level]
        index[level] += 1
        frm = moves[level, i, 0]
        to = moves[level, i, 1]
        mk = moves[level, i, 2]
        cap, p = _apply_raw(board, frm, to, mk, side)
        undo[level, 0] = frm
        undo[level, 1] = to
        undo[level, 2] = mk
        undo[level, 3] = cap
        undo[level, 4] = p
        level += 1
        counts[level] = gen_legal(board, -side, moves[level], T)
        index[level] = 0
    return total


@njit(cache=True)
def raw_components(board, psqt, T):
    """Single-pass raw evaluation terms.

    Returns ``(counts, comps)``: signed per-kind piece counts (Gold minus
    Scarlet, for the material term) and the ten dynamic components in the
    order psqt, mobility, king safety, threats, passed pieces, pawn count,
    imbalance, space, activity penalty, dragon centralization.  All terms are
    from Gold's point of view.
    """
    step_start = T[0]
    step_end = T[1]
    step_to = T[2]
    step_flags = T[3]
    step_block = T[4]
    ray_start = T[5]
    ray_end = T[6]
    ray_sq_start = T[7]
    ray_sq_end = T[8]
    ray_sq = T[9]
    slc_start = T[10]
    slc_end = T[11]
    slc_to = T[12]
    slc_block = T[13]
    base_vals = T[22]
    psqt_class = T[23]

    gcnt = np.zeros(16, dtype=np.int64)
    scnt = np.zeros(16, dtype=np.int64)
    gatt = np.zeros(288, dtype=np.uint8)
    satt = np.zeros(288, dtype=np.uint8)
    comps = np.zeros(10, dtype=np.float64)

    gmob = 0
    smob = 0
    gact = 0.0
    sact = 0.0
    gk = -1
    sk = -1
    gkm = 0
    skm = 0
    psqt_sum = 0.0
    dragon_center = 0

    for sq in range(288):
        p = board[sq]
        if p == 0:
            continue
        color = 1 if p > 0 else -1
        k = p if p > 0 else -p
        level = sq // 96
        rank = sq % 96 // 12
        file = sq % 12

        if color > 0:
            gcnt[k] += 1
        else:
            scnt[k] += 1

        cls = psqt_class[k]
        if level == 1 and cls >= 0 and 2 <= file <= 9:
            if color > 0:
                psqt_sum += psqt[cls, rank, file - 2]
            else:
                psqt_sum -= psqt[cls, 7 - rank, file - 2]

        if k == 3 and level == 0 and 4 <= file <= 7 and 2 <= rank <= 5:
            dragon_center += color

        frozen = level == 1 and board[sq + 96] == -color * 13
        moves = 0
        if not frozen:
            cidx = 0 if color > 0 else 1
            key = (cidx * 16 + k) * 288 + sq
            for i in range(step_start[key], step_end[key]):
                to = step_to[i]
                flags = step_flags[i]
                blk = step_block[i]
                if blk >= 0 and board[blk] != 0:
                    continue
                t = board[to]
                if flags & 4:
                    if t * color < 0:
                        moves += 1
                    continue
                if t == 0:
                    if flags & 1:
                        moves += 1
                elif t * color < 0:
                    if flags & 2:
                        moves += 1
            for i in range(slc_start[key], slc_end[key]):
                blk = slc_block[i]
                if blk >= 0 and board[blk] != 0:
                    continue
                if color > 0:
                    gatt[slc_to[i]] = 1
                else:
                    satt[slc_to[i]] = 1
            for r in range(ray_start[key], ray_end[key]):
                for j in range(ray_sq_start[r], ray_sq_end[r]):
                    to = ray_sq[j]
                    t = board[to]
                    if color > 0:
                        gatt[to] = 1
                    else:
                        satt[to] = 1
                    if t == 0:
                        moves += 1
                    else:
                        if t * color < 0:
                            moves += 1
                        break

        if color > 0:
            gmob += moves
        else:
            smob += moves
        if moves == 0:
            if color > 0:
                gact -= 10.0
            else:
                sact -= 10.0
        if k == 10 and level != 1:
            if color > 0:
                gact -= 30.0
            else:
                sact -= 30.0
        if k == 11:
            if color > 0:
                gk = sq
                gkm = moves
            else:
                sk = sq
                skm = moves

    comps[0] = psqt_sum
    comps[1] = gmob - smob

    if gk >= 0 and sk >= 0:
        g_danger = -4.0 * gkm
        s_danger = -4.0 * skm
        for side in range(2):
            ksq = gk if side == 0 else sk
            kcolor = 1 if side == 0 else -1
            level = ksq // 96
            rank = ksq % 96 // 12
            file = ksq % 12
            near_enemies = 0
            for dr in range(-2, 3):
                r = rank + dr
                if r < 0 or r >= 8:
                    continue
                for df in range(-2, 3):
                    f = file + df
                    if f < 0 or f >= 12:
                        continue
                    if board[level * 96 + r * 12 + f] * kcolor < 0:
                        near_enemies += 1
            shield = 0
            r = rank + (1 if kcolor > 0 else -1)
            if 0 <= r < 8:
                for df in range(-1, 2):
                    f = file + df
                    if 0 <= f < 12:
                        q = board[level * 96 + r * 12 + f] * kcolor
                        if q == 1 or q == 4 or q == 14:
                            shield += 1
            if side == 0:
                g_danger += 8.0 * near_enemies - 6.0 * shield
            else:
                s_danger += 8.0 * near_enemies - 6.0 * shield
        comps[2] = s_danger - g_danger

    threats = 0.0
    space = 0
    for sq in range(288):
        p = board[sq]
        if p == 0:
            space += np.int64(gatt[sq]) - np.int64(satt[sq])
        elif p < 0:
            if gatt[sq] == 1:
                threats += base_vals[-p] / 10.0
        else:
            if satt[sq] == 1:
                threats -= base_vals[p] / 10.0
    comps[3] = threats
    comps[7] = space

    passed = 0.0
    for sq in range(288):
        p = board[sq]
        if p == 0:
            continue
        k = p if p > 0 else -p
        if k != 1 and k != 4 and k != 14:
            continue
        color = 1 if p > 0 else -1
        level = sq // 96
        rank = sq % 96 // 12
        file = sq % 12
        clear = True
        r = rank + color
        while 0 <= r < 8 and clear:
            for df in range(-1, 2):
                f = file + df
                if 0 <= f < 12 and board[level * 96 + r * 12 + f] * color < 0:
                    clear = False
                    break
            r += color
        if clear:
            advance = rank - 1 if color > 0 else 6 - rank
            passed += color * 10.0 * advance
    comps[4] = passed

    g_pawns = gcnt[1] + gcnt[4] + gcnt[14]
    s_pawns = scnt[1] + scnt[4] + scnt[14]
    if g_pawns + s_pawns > 0:
        comps[5] = 100.0 * (g_pawns - s_pawns) / (g_pawns + s_pawns)

    imbalance = 0.0
    for k in (2, 5, 6, 7, 8, 13):
        g_pair = gcnt[k] >= 2
        s_pair = scnt[k] >= 2
        if g_pair and not s_pair:
            imbalance += 25.0
        if s_pair and not g_pair:
            imbalance -= 25.0
    comps[6] = imbalance

    comps[8] = gact - sact
    comps[9] = 20.0 * dragon_center

    counts = gcnt - scnt
    return counts, comps


@njit(cache=True)
def eval_total(board, piece_vals, comp_weights, psqt, T):
    """Weighted heuristic total from Gold's perspective.

    ``piece_vals[k]`` is the theta-scaled value of kind ``k`` (the King entry
    stays at its fixed value); ``comp_weights`` holds the eleven component
    weights, material first.
    """
    counts, comps = raw_components(board, psqt, T)
    material = 0.0
    for k in range(1, 16):
        material += counts[k] * piece_vals[k]
    total = comp_weights[0] * material
    for i in range(10):
        total += comp_weights[i + 1] * comps[i]
    return total


@njit(cache=True)
def _order_moves(buf, n, order_out, base_vals):
    """Capture-first ordering: victim baseline value descending, then
    (from, to, kind) ascending."""
    keys = np.empty(n, dtype=np.int64)
    for i in range(n):
        cap = buf[i, 3]
        victim = base_vals[cap if cap > 0 else -cap] if cap != 0 else 0.0
        keys[i] = ((np.int64(20001) - np.int64(victim)) << 20) + (buf[i, 0] * 288 + buf[i, 1]) * 4 + buf[i, 2]
    ranked = np.argsort(keys)
    for i in range(n):
        order_out[i] = ranked[i]


@njit(cache=True)
def negamax(board, color, quiet_clock, abs_ply, depth, alpha0, beta0, rel_ply_base, piece_vals, comp_weights, psqt, T):
    """Alpha-beta negamax; value is from the perspective of ``color`` to move.

    The draw clocks terminate lines at the quiet/total ply caps; a side with
    no legal move scores mate (faster mates preferred) or stalemate 0.
    Iterative with an explicit frame stack (self-recursive jitted functions
    break numba's on-disk cache).
    """
    if abs_ply >= 600 or quiet_clock >= 100:
        return 0.0
    if depth <= 0:
        v = eval_total(board, piece_vals, comp_weights, psqt, T)
        return v if color > 0 else -v

    base_vals = T[22]
    moves = np.empty((depth, MOVE_BUF_ROWS, 4), dtype=np.int64)
    order = np.empty((depth, MOVE_BUF_ROWS), dtype=np.int64)
    nmv = np.zeros(depth, dtype=np.int64)
    idx = np.zeros(depth, dtype=np.int64)
    alpha = np.empty(depth, dtype=np.float64)
    beta = np.empty(depth, dtype=np.float64)
    best = np.empty(depth, dtype=np.float64)
    quiet = np.zeros(depth, dtype=np.int64)
    undo = np.zeros((depth, 5), dtype=np.int64)  # frm, to, mk, cap, mover

    n = gen_legal(board, color, moves[0], T)
    if n == 0:
        ksq = find_king(board, color)
        if ksq >= 0 and is_attacked(board, ksq, -color, T):
            return -(MATE_VALUE - rel_ply_base)
        return 0.0
    _order_moves(moves[0], n, order[0], base_vals)
    nmv[0] = n
    alpha[0] = alpha0
    beta[0] = beta0
    best[0] = -1.0e18
    quiet[0] = quiet_clock

    level = 0
    while True:
        side = color if level % 2 == 0 else -color
        if idx[level] >= nmv[level] or best[level] >= beta[level]:
            value = best[level]
            if level == 0:
                return value
            level -= 1
            _undo_raw(board, undo[level, 0], undo[level, 1], undo[level, 2], undo[level, 3], undo[level, 4])
            if -value > best[level]:
                best[level] = -value
            if best[level] > alpha[level]:
                alpha[level] = best[level]
            continue

        i = order[level, idx[level]]
        idx[level] += 1
        frm = moves[level, i, 0]
        to = moves[level, i, 1]
        mk = moves[level, i, 2]
        cap = moves[level, i, 3]
        mover = board[frm]
        quiet2 = 0 if (cap != 0 or mover == 4 * side) else quiet[level] + 1
        c, p = _apply_raw(board, frm, to, mk, side)

        child_value_known = False
        child_value = 0.0
        nc = 0
        child_abs = abs_ply + level + 1
        if child_abs >= 600 or quiet2 >= 100:
            child_value_known = True
            child_value = 0.0
        elif depth - level - 1 == 0:
            ev = eval_total(board, piece_vals, comp_weights, psqt, T)
            child_value = ev if -side > 0 else -ev
            child_value_known = True
        else:
            nc = gen_legal(board, -side, moves[level + 1], T)
            if nc == 0:
                ksq = find_king(board, -side)
                if ksq >= 0 and is_attacked(board, ksq, side, T):
                    child_value = -(MATE_VALUE - (rel_ply_base + level + 1))
                else:
                    child_value = 0.0
                child_value_known = True

        if child_value_known:
            _undo_raw(board, frm, to, mk, c, p)
            if -child_value > best[level]:
                best[level] = -child_value
            if best[level] > alpha[level]:
                alpha[level] = best[level]
            continue

        undo[level, 0] = frm
        undo[level, 1] = to
        undo[level, 2] = mk
        undo[level, 3] = c
        undo[level, 4] = p
        _order_moves(moves[level + 1], nc, order[level + 1], base_vals)
        level += 1
        nmv[level] = nc
        idx[level] = 0
        alpha[level] = -beta[level - 1]
        beta[level] = -alpha[level - 1]
        best[level] = -1.0e18
        quiet[level] = quiet2


@njit(cache=True)
def search_child_value(board, color, quiet_clock, abs_ply, frm, to, mk, depth, piece_vals, comp_weights, psqt, T):
    """Exact minimax value of one root move searched to ``depth`` below it.

    Full window at the root child means internal pruning cannot change the
    returned value, which keeps root tie-breaking exact and order-independent.
    """
    cap = board[to]
    mover = board[frm]
    quiet2 = 0 if (cap != 0 or mover == 4 * color) else quiet_clock + 1
    c, p = _apply_raw(board, frm, to, mk, color)
    v = -negamax(
        board, -color, quiet2, abs_ply + 1, depth, -1.0e18, 1.0e18, 1,
        piece_vals, comp_weights, psqt, T,
    )
    _undo_raw(board, frm, to, mk, c, p)
    return v
