"""Swiss-system tournament with per-round Elo updates.

Pairing: entrants sorted by (score, Elo, entry order); a backtracking matcher
pairs from the top avoiding rematches whenever a rematch-free perfect matching
exists, and falls back to rematches only when it does not.  Elo: K=32 from
1500, applied after each round in pairing order; the loser's delta is the
exact negative of the winner's, so ratings stay zero-sum to the last bit.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DomainError
from .movegen import GameResult
from .search import AgentConfig, GameRecord, play_game
from .seeding import derive_seed

ELO_INITIAL = 1500.0
ELO_K = 32.0


def elo_expected(ra: float, rb: float) -> float:
    return 1.0 / (1.0 + 10.0 ** ((rb - ra) / 400.0))


def elo_update(ra: float, rb: float, result_for_a: float) -> tuple[float, float]:
    """New (ra, rb) after one game; ``result_for_a`` is 1, 0.5 or 0."""
    if result_for_a not in (0.0, 0.5, 1.0):
        raise DomainError(f"result must be 1, 0.5 or 0, got {result_for_a}")
    delta = ELO_K * (result_for_a - elo_expected(ra, rb))
    return ra + delta, rb - delta


@dataclass
class Entrant:
    name: str
    config: AgentConfig
    score: float = 0.0
    elo: float = ELO_INITIAL
    wins: int = 0
    losses: int = 0
    draws: int = 0
    opponents: list[int] = field(default_factory=list)  # entrant indices faced
    gold_games: int = 0
    byes: int = 0

    @property
    def games(self) -> int:
        return self.wins + self.losses + self.draws


@dataclass
class Pairing:
    gold: int
    scarlet: int


@dataclass
class RoundLog:
    round_index: int
    pairings: list[Pairing]
    bye: int | None
    results: list[str] = field(default_factory=list)  # gold|scarlet|draw per pairing


@dataclass
class TournamentState:
    entrants: list[Entrant]
    round_index: int = 0
    rounds: list[RoundLog] = field(default_factory=list)


def standings_order(state: TournamentState) -> list[int]:
    return sorted(
        range(len(state.entrants)),
        key=lambda i: (-state.entrants[i].elo, -state.entrants[i].score, i),
    )


def _pairing_order(state: TournamentState) -> list[int]:
    return sorted(
        range(len(state.entrants)),
        key=lambda i: (-state.entrants[i].score, -state.entrants[i].elo, i),
    )


def _match_without_rematch(order: list[int], faced: dict[int, set[int]]) -> list[tuple[int, int]] | None:
    """Perfect matching in sorted order, refusing rematches; None if impossible."""
    if not order:
        return []
    first, rest = order[0], order[1:]
    for j, partner in enumerate(rest):
        if partner in faced[first]:
            continue
        tail = _match_without_rematch(rest[:j] + rest[j + 1 :], faced)
        if tail is not None:
            return [(first, partner)] + tail
    return None


def _match_greedy_with_rematches(order: list[int], faced: dict[int, set[int]]) -> list[tuple[int, int]]:
    out = []
    remaining = list(order)
    while remaining:
        first = remaining.pop(0)
        partner = next((e for e in remaining if e not in faced[first]), remaining[0])
        remaining.remove(partner)
        out.append((first, partner))
    return out


def pair_round(state: TournamentState) -> tuple[list[Pairing], int | None]:
    """Pairings for the next round plus the bye entrant (if the field is odd).

    The bye goes to the lowest-ranked entrant with the fewest byes; it scores a
    full point and no Elo change.
    """
    if len(state.entrants) < 2:
        raise DomainError("a tournament needs at least two entrants")
    order = _pairing_order(state)
    bye = None
    if len(order) % 2 == 1:
        bye = min(reversed(order), key=lambda i: state.entrants[i].byes)
        order = [i for i in order if i != bye]
    faced = {i: set(state.entrants[i].opponents) for i in order}
    pairs = _match_without_rematch(order, faced)
    if pairs is None:
        pairs = _match_greedy_with_rematches(order, faced)

    pairings = []
    for a, b in pairs:
        # Alternate colors: the entrant who has had fewer Gold games takes Gold.
        ea, eb = state.entrants[a], state.entrants[b]
        if eb.gold_games < ea.gold_games:
            a, b = b, a
        pairings.append(Pairing(gold=a, scarlet=b))
    return pairings, bye


def _play_pairing(args) -> tuple[str, str]:
    gold_cfg, scarlet_cfg, seed = args
    result, record = play_game(gold_cfg, scarlet_cfg, seed=seed)
    return result.value, record.to_text()


def play_round(
    state: TournamentState,
    seed: int,
    jobs: int = 1,
    record_dir=None,
) -> RoundLog:
    """Pair, play every pairing, then apply scores and Elo in pairing order."""
    pairings, bye = pair_round(state)
    round_index = state.round_index
    tasks = []
    for board, pairing in enumerate(pairings):
        game_seed = derive_seed(seed, "round", round_index, "board", board)
        tasks.append(
            (state.entrants[pairing.gold].config, state.entrants[pairing.scarlet].config, game_seed)
        )

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_play_pairing, tasks))
    else:
        outcomes = [_play_pairing(task) for task in tasks]
    results = [result for result, _ in outcomes]
    if record_dir is not None:
        for board, (_, record_text) in enumerate(outcomes):
            path = Path(record_dir) / f"round{round_index:03d}_board{board}.rec"
            path.write_text(record_text)

    log = RoundLog(round_index=round_index, pairings=pairings, bye=bye, results=results)
    if bye is not None:
        state.entrants[bye].score += 1.0
        state.entrants[bye].byes += 1
    for pairing, result in zip(pairings, results):
        g, s = state.entrants[pairing.gold], state.entrants[pairing.scarlet]
        g.opponents.append(pairing.scarlet)
        s.opponents.append(pairing.gold)
        g.gold_games += 1
        if result == "gold":
            g.score += 1.0
            g.wins += 1
            s.losses += 1
            g.elo, s.elo = elo_update(g.elo, s.elo, 1.0)
        elif result == "scarlet":
            s.score += 1.0
            s.wins += 1
            g.losses += 1
            g.elo, s.elo = elo_update(g.elo, s.elo, 0.0)
        else:
            g.score += 0.5
            s.score += 0.5
            g.draws += 1
            s.draws += 1
            g.elo, s.elo = elo_update(g.elo, s.elo, 0.5)
    state.rounds.append(log)
    state.round_index += 1
    return log


def run_tournament(
    entrants: list[tuple[str, AgentConfig]],
    rounds: int,
    seed: int = 0,
    jobs: int = 1,
    record_dir=None,
    progress=None,
) -> TournamentState:
    if rounds < 1:
        raise DomainError("need at least one round")
    state = TournamentState(entrants=[Entrant(name=n, config=c) for n, c in entrants])
    if len(state.entrants) < 2:
        raise DomainError("a tournament needs at least two entrants")
    for _ in range(rounds):
        log = play_round(state, seed=seed, jobs=jobs, record_dir=record_dir)
        if progress is not None:
            progress(state, log)
    return state


def standings_table(state: TournamentState) -> str:
    """Tab-separated standings: Agent / Wins / Losses / Draws / Elo, best first."""
    lines = ["Agent\tWins\tLosses\tDraws\tElo"]
    for i in standings_order(state):
        e = state.entrants[i]
        lines.append(f"{e.name}\t{e.wins}\t{e.losses}\t{e.draws}\t{e.elo:.1f}")
    return "\n".join(lines) + "\n"


def standings_pretty(state: TournamentState) -> str:
    header = f"{'Agent':<32}{'Wins':>6}{'Losses':>8}{'Draws':>7}{'Elo':>10}"
    lines = [header, "-" * len(header)]
    for i in standings_order(state):
        e = state.entrants[i]
        lines.append(f"{e.name:<32}{e.wins:>6}{e.losses:>8}{e.draws:>7}{e.elo:>10.1f}")
    return "\n".join(lines) + "\n"
