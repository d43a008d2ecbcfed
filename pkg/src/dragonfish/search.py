"""Time- and depth-budgeted agents: iterative-deepening alpha-beta and the
uniform-random baseline."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import kernels
from .board import GOLD, Move, Position, SCARLET, apply_move, initial_position
from .errors import DataError, DomainError
from .evaluation import (
    check_theta,
    component_weights,
    default_psqt,
    identity_theta,
    piece_values,
)
from .movegen import GameResult, format_move, legal_moves, terminal_state
from .seeding import derive_seed
from .tables import BASE_VALUES, TABLES

RANDOM = "random"
MINIMAX = "minimax"

MAX_SEARCH_DEPTH = 64


@dataclass
class AgentConfig:
    """How one side picks its moves.

    Exactly one budget drives a minimax agent: ``max_depth`` (depth-cap mode,
    fully reproducible) or ``time_budget_ms`` (wall-clock mode mirroring the
    tournament protocol).  Random agents ignore theta and budgets.
    """

    kind: str = MINIMAX
    theta: np.ndarray | None = None
    theta_name: str = "identity"
    time_budget_ms: int | None = None
    max_depth: int | None = None
    rng_seed: int = 0
    label: str = ""

    def __post_init__(self):
        if self.kind not in (RANDOM, MINIMAX):
            raise DomainError(f"unknown agent kind {self.kind!r}")
        if self.time_budget_ms is not None and self.time_budget_ms <= 0:
            raise DomainError("time budget must be positive")
        if self.kind == MINIMAX and self.time_budget_ms is None and self.max_depth is None:
            raise DomainError("minimax agent needs a depth cap or a time budget")
        if self.theta is not None:
            self.theta = check_theta(self.theta)
        if not self.label:
            self.label = self.default_label()

    def default_label(self) -> str:
        if self.kind == RANDOM:
            return f"random[seed={self.rng_seed}]"
        budget = (
            f"depth={self.max_depth}" if self.time_budget_ms is None else f"time={self.time_budget_ms}ms"
        )
        return f"minimax[{self.theta_name},{budget}]"

    def budget_text(self) -> str:
        if self.kind == RANDOM:
            return "-"
        if self.time_budget_ms is None:
            return f"depth={self.max_depth}"
        return f"time_ms={self.time_budget_ms}"


def random_agent(seed: int = 0, label: str = "") -> AgentConfig:
    return AgentConfig(kind=RANDOM, rng_seed=seed, label=label)


def minimax_agent(
    depth: int | None = None,
    theta=None,
    theta_name: str = "identity",
    time_budget_ms: int | None = None,
    seed: int = 0,
    label: str = "",
) -> AgentConfig:
    return AgentConfig(
        kind=MINIMAX,
        theta=None if theta is None else np.asarray(theta, dtype=np.float64),
        theta_name=theta_name,
        time_budget_ms=time_budget_ms,
        max_depth=depth,
        rng_seed=seed,
        label=label,
    )


@dataclass
class SearchReport:
    move: Move
    value: float
    depth: int
    nodes_root: int


def _order_root_moves(moves: list[Move], prev_best: Move | None) -> list[Move]:
    # Captures first by victim value descending, then the previous iteration's
    # best move, then the rest; the full-window root makes this order a pure
    # performance hint (tie-breaking is by (from, to, kind), not visit order).
    def key(m: Move):
        victim = BASE_VALUES[abs(m.captured)] if m.captured != 0 else 0.0
        is_prev = (
            prev_best is not None
            and m.from_sq == prev_best.from_sq
            and m.to_sq == prev_best.to_sq
            and m.kind == prev_best.kind
        )
        return (-victim, 0 if is_prev else 1, m.sort_key())

    return sorted(moves, key=key)


def _search_depth(
    position: Position,
    moves: list[Move],
    depth: int,
    piece_vals: np.ndarray,
    comp_w: np.ndarray,
    psqt_arr: np.ndarray,
    prev_best: Move | None,
    deadline: float | None,
) -> tuple[Move, float] | None:
    """One fully searched depth; None if the deadline hit mid-scan (partial
    results are discarded above depth 1 by the caller)."""
    cells = position.cells.copy()
    side = position.side_to_move
    quiet = position.halfmove_clock_for_draw
    ply = position.ply_count
    best: Move | None = None
    best_value = -np.inf
    for move in _order_root_moves(moves, prev_best):
        if deadline is not None and time.monotonic() > deadline and best is not None:
            return None
        value = float(
            kernels.search_child_value(
                cells,
                side,
                quiet,
                ply,
                move.from_sq,
                move.to_sq,
                int(move.kind),
                depth - 1,
                piece_vals,
                comp_w,
                psqt_arr,
                TABLES,
            )
        )
        if best is None or value > best_value or (
            value == best_value and move.sort_key() < best.sort_key()
        ):
            best = move
            best_value = value
    return best, best_value


def search_report(position: Position, config: AgentConfig) -> SearchReport:
    """Pick a move for the side to move; deterministic given (position, config)."""
    if terminal_state(position) != GameResult.ONGOING:
        raise DomainError("cannot search a terminal position")
    moves = legal_moves(position).moves

    if config.kind == RANDOM:
        rng = random.Random(derive_seed(config.rng_seed, position.key()))
        return SearchReport(move=rng.choice(moves), value=0.0, depth=0, nodes_root=len(moves))

    theta = identity_theta() if config.theta is None else config.theta
    piece_vals = piece_values(theta)
    comp_w = component_weights(theta)
    psqt_arr = default_psqt()

    start = time.monotonic()
    deadline = None
    if config.time_budget_ms is not None:
        deadline = start + config.time_budget_ms / 1000.0
    max_depth = config.max_depth if config.max_depth is not None else MAX_SEARCH_DEPTH

    best: Move | None = None
    best_value = 0.0
    completed = 0
    for depth in range(1, max_depth + 1):
        result = _search_depth(
            position, moves, depth, piece_vals, comp_w, psqt_arr, best, deadline
        )
        if result is None:  # aborted mid-depth; keep the last complete depth
            break
        best, best_value = result
        completed = depth
        if deadline is not None and time.monotonic() > deadline:
            break
        if best_value >= kernels.MATE_VALUE - MAX_SEARCH_DEPTH:
            break  # forced win found; deeper search cannot improve it
    assert best is not None  # depth 1 always completes (partial scan at worst)
    return SearchReport(move=best, value=best_value, depth=completed, nodes_root=len(moves))


def best_move(position: Position, config: AgentConfig) -> Move:
    return search_report(position, config).move


def plain_minimax_value(position: Position, depth: int, theta=None) -> float:
    """Reference minimax (no pruning) over the same leaf evaluation; test oracle
    for pruning soundness.  Value is from the side to move's perspective."""
    if position.ply_count >= 600 or position.halfmove_clock_for_draw >= 100:
        return 0.0
    from .evaluation import heuristic_total

    side = position.side_to_move
    if depth == 0:
        v = heuristic_total(position, theta)
        return v if side == GOLD else -v
    moves = legal_moves(position).moves
    if not moves:
        from .movegen import in_check

        if in_check(position, side):
            return -(kernels.MATE_VALUE - 0)
        return 0.0
    return max(
        -plain_minimax_value(apply_move(position, m), depth - 1, theta) for m in moves
    )


# --- game driving ---------------------------------------------------------------


@dataclass
class GameRecord:
    """Header plus the move list in text notation, one move per line."""

    gold_label: str
    scarlet_label: str
    gold_budget: str
    scarlet_budget: str
    seed: int
    mode: str  # "depth" or "time"
    result: str = "ongoing"
    ply_count: int = 0
    forfeit: str = "none"
    moves: list[str] = field(default_factory=list)

    def to_text(self) -> str:
        lines = [
            "dragonfish-game v1",
            f"gold: {self.gold_label}",
            f"scarlet: {self.scarlet_label}",
            f"gold_budget: {self.gold_budget}",
            f"scarlet_budget: {self.scarlet_budget}",
            f"seed: {self.seed}",
            f"mode: {self.mode}",
            f"result: {self.result}",
            f"plies: {self.ply_count}",
            f"forfeit: {self.forfeit}",
            "",
        ]
        lines.extend(self.moves)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "GameRecord":
        lines = text.splitlines()
        if not lines or lines[0] != "dragonfish-game v1":
            raise DataError("not a dragonfish game record")
        header: dict[str, str] = {}
        body_at = len(lines)
        for i, line in enumerate(lines[1:], start=1):
            if line == "":
                body_at = i + 1
                break
            key, _, value = line.partition(": ")
            header[key] = value
        try:
            record = cls(
                gold_label=header["gold"],
                scarlet_label=header["scarlet"],
                gold_budget=header["gold_budget"],
                scarlet_budget=header["scarlet_budget"],
                seed=int(header["seed"]),
                mode=header["mode"],
                result=header["result"],
                ply_count=int(header["plies"]),
                forfeit=header["forfeit"],
            )
        except KeyError as exc:
            raise DataError(f"game record missing header field {exc}") from exc
        record.moves = [ln for ln in lines[body_at:] if ln]
        return record

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())


def _with_game_seed(config: AgentConfig, game_seed: int, side: int) -> AgentConfig:
    return replace(
        config, rng_seed=derive_seed(config.rng_seed, game_seed, side), label=config.label
    )


def play_game(
    gold: AgentConfig,
    scarlet: AgentConfig,
    seed: int = 0,
    start: Position | None = None,
) -> tuple[GameResult, GameRecord]:
    """Alternate best_move from the start until the game ends.

    Deterministic given seeds when both agents run in depth-cap mode.  In
    wall-clock mode an agent taking over 10x its budget forfeits.
    """
    mode = "time" if (gold.time_budget_ms or scarlet.time_budget_ms) else "depth"
    record = GameRecord(
        gold_label=gold.label,
        scarlet_label=scarlet.label,
        gold_budget=gold.budget_text(),
        scarlet_budget=scarlet.budget_text(),
        seed=seed,
        mode=mode,
    )
    agents = {
        GOLD: _with_game_seed(gold, seed, GOLD),
        SCARLET: _with_game_seed(scarlet, seed, SCARLET),
    }
    position = initial_position() if start is None else start.copy()
    result = terminal_state(position)
    while result == GameResult.ONGOING:
        config = agents[position.side_to_move]
        t0 = time.monotonic()
        move = best_move(position, config)
        elapsed_ms = (time.monotonic() - t0) * 1000.0
        if config.time_budget_ms is not None and elapsed_ms > 10 * config.time_budget_ms:
            side = "gold" if position.side_to_move == GOLD else "scarlet"
            record.forfeit = side
            result = GameResult.SCARLET_WINS if side == "gold" else GameResult.GOLD_WINS
            break
        record.moves.append(format_move(move))
        position = apply_move(position, move)
        result = terminal_state(position)
    record.result = result.value
    record.ply_count = position.ply_count
    return result, record
