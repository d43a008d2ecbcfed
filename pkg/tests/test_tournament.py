"""Elo math, Swiss pairing, and tournament bookkeeping."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dragonfish.errors import DomainError
from dragonfish.search import minimax_agent, random_agent
from dragonfish.tournament import (
    ELO_INITIAL,
    Entrant,
    TournamentState,
    elo_expected,
    elo_update,
    pair_round,
    run_tournament,
    standings_order,
    standings_table,
)


def make_state(n, scores=None, elos=None):
    entrants = [Entrant(name=f"e{i}", config=random_agent(seed=i)) for i in range(n)]
    for i, e in enumerate(entrants):
        if scores is not None:
            e.score = scores[i]
        if elos is not None:
            e.elo = elos[i]
    return TournamentState(entrants=entrants)


class TestElo:
    def test_equal_ratings_win(self):
        assert elo_update(1500, 1500, 1.0) == (1516.0, 1484.0)

    def test_equal_ratings_draw(self):
        assert elo_update(1500, 1500, 0.5) == (1500.0, 1500.0)

    def test_higher_rated_win_small_gain(self):
        ra, rb = elo_update(1700, 1500, 1.0)
        expected = 32 * (1 - 1 / (1 + 10 ** (-0.5)))
        assert ra - 1700 == pytest.approx(expected)
        assert ra - 1700 == pytest.approx(7.688, abs=1e-3)
        assert rb - 1500 == pytest.approx(-expected)

    def test_bad_result_rejected(self):
        with pytest.raises(DomainError):
            elo_update(1500, 1500, 0.7)

    @given(
        st.floats(1000, 2000),
        st.floats(1000, 2000),
        st.sampled_from([0.0, 0.5, 1.0]),
    )
    @settings(max_examples=200, deadline=None)
    def test_zero_sum_exact(self, ra, rb, result):
        na, nb = elo_update(ra, rb, result)
        assert (na - ra) == -(nb - rb)  # bit-exact zero sum

    def test_expected_score_midpoint(self):
        assert elo_expected(1500, 1500) == 0.5


class TestPairing:
    def test_round1_pairs_in_sorted_order(self):
        state = make_state(8)
        pairings, bye = pair_round(state)
        assert bye is None
        assert [(p.gold, p.scarlet) for p in pairings] == [(0, 1), (2, 3), (4, 5), (6, 7)]

    def test_sorted_by_score_then_elo(self):
        state = make_state(4, scores=[0, 1, 1, 0], elos=[1500, 1490, 1510, 1500])
        pairings, _ = pair_round(state)
        assert (pairings[0].gold, pairings[0].scarlet) == (2, 1)
        assert (pairings[1].gold, pairings[1].scarlet) == (0, 3)

    def test_two_entrants_rematch_forced(self):
        state = make_state(2)
        state.entrants[0].opponents.append(1)
        state.entrants[1].opponents.append(0)
        pairings, bye = pair_round(state)
        assert bye is None
        assert len(pairings) == 1  # fallback permits the rematch

    def test_bye_for_odd_field(self):
        state = make_state(5)
        pairings, bye = pair_round(state)
        assert bye == 4  # lowest-ranked entrant
        assert len(pairings) == 2

    def test_no_round2_repeat_for_all_result_patterns(self):
        # brute force all 16 win/loss patterns of round 1 with 8 entrants:
        # round 2 must never repeat a pairing (a fresh perfect matching exists)
        for pattern in itertools.product((1.0, 0.0), repeat=4):
            state = make_state(8)
            pairings, _ = pair_round(state)
            for pairing, gold_score in zip(pairings, pattern):
                g, s = state.entrants[pairing.gold], state.entrants[pairing.scarlet]
                g.opponents.append(pairing.scarlet)
                s.opponents.append(pairing.gold)
                g.gold_games += 1
                g.score += gold_score
                s.score += 1.0 - gold_score
                g.elo, s.elo = elo_update(g.elo, s.elo, gold_score)
            second, _ = pair_round(state)
            for pairing in second:
                assert pairing.scarlet not in state.entrants[pairing.gold].opponents

    def test_single_entrant_rejected(self):
        with pytest.raises(DomainError):
            pair_round(make_state(1))

    def test_colors_alternate_when_possible(self):
        state = make_state(2)
        state.entrants[0].gold_games = 1
        pairings, _ = pair_round(state)
        assert pairings[0].gold == 1


class TestRunTournament:
    @pytest.fixture(scope="class")
    def small_state(self):
        entrants = [
            ("random-1", random_agent(seed=101)),
            ("random-2", random_agent(seed=102)),
            ("random-3", random_agent(seed=103)),
            ("random-4", random_agent(seed=104)),
        ]
        return run_tournament(entrants, rounds=6, seed=77)

    def test_game_counts(self, small_state):
        for e in small_state.entrants:
            assert e.games == 6

    def test_scores_conserve(self, small_state):
        total_wins = sum(e.wins for e in small_state.entrants)
        total_losses = sum(e.losses for e in small_state.entrants)
        total_draws = sum(e.draws for e in small_state.entrants)
        assert total_wins == total_losses
        assert total_draws % 2 == 0

    def test_elo_zero_sum(self, small_state):
        assert sum(e.elo for e in small_state.entrants) == pytest.approx(
            ELO_INITIAL * 4, abs=1e-9
        )

    def test_deterministic(self):
        entrants = lambda: [
            ("random-1", random_agent(seed=1)),
            ("random-2", random_agent(seed=2)),
        ]
        a = run_tournament(entrants(), rounds=3, seed=5)
        b = run_tournament(entrants(), rounds=3, seed=5)
        assert standings_table(a) == standings_table(b)
        assert [r.results for r in a.rounds] == [r.results for r in b.rounds]

    def test_all_random_field_near_half(self):
        # pairwise win rates statistically indistinguishable from 0.5:
        # aggregated decisive-game split within binomial 99% bounds
        entrants = [(f"random-{i}", random_agent(seed=200 + i)) for i in range(4)]
        state = run_tournament(entrants, rounds=25, seed=31)
        decisive = sum(e.wins for e in state.entrants)
        gold_wins = sum(
             1 for r in state.rounds for result in r.results if result == "gold"
        )
        total = sum(len(r.results) for r in state.rounds)
        assert total == 50
        # decisive games split between gold and scarlet sides: 99% binomial bound
        if decisive > 0:
            p_hat = gold_wins / decisive
            bound = 2.576 * np.sqrt(0.25 / decisive)
            assert abs(p_hat - 0.5) <= bound

    def test_standings_table_shape(self, small_state):
        lines = standings_table(small_state).strip().splitlines()
        assert lines[0] == "Agent\tWins\tLosses\tDraws\tElo"
        assert len(lines) == 5
        for line in lines[1:]:
            fields = line.split("\t")
            assert len(fields) == 5
            int(fields[1]), int(fields[2]), int(fields[3]), float(fields[4])

    def test_standings_sorted_by_elo(self, small_state):
        order = standings_order(small_state)
        elos = [small_state.entrants[i].elo for i in order]
        assert elos == sorted(elos, reverse=True)

    def test_records_archived(self, tmp_path):
        entrants = [
            ("random-1", random_agent(seed=1)),
            ("random-2", random_agent(seed=2)),
        ]
        run_tournament(entrants, rounds=2, seed=5, record_dir=tmp_path)
        records = sorted(tmp_path.glob("*.rec"))
        assert len(records) == 2
        from dragonfish.search import GameRecord

        loaded = GameRecord.from_text(records[0].read_text())
        assert loaded.result in ("gold", "scarlet", "draw")
