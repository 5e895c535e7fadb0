"""Null model arithmetic and logistic fitting behavior."""

import math
from datetime import datetime, timedelta

import numpy as np
import pytest

from darts271.core import GameRecord, RoundScores, VALID_SCORES
from darts271.dataset import Dataset
from darts271.models import NullModel, fit_logistic_model
from darts271.numerics import RandomSource


class TestNullModel:
    def test_worked_example(self):
        assert NullModel().predict("a", "b", 75, 45) == 0.65

    def test_symmetry_at_equal_scores(self):
        model = NullModel()
        for s in (0, 100, 271, 400):
            assert model.predict("a", "b", s, s) == 0.5

    def test_clamps(self):
        model = NullModel()
        assert model.predict("a", "b", 200, 50) == 1.0
        assert model.predict("a", "b", 50, 200) == 0.0

    def test_modified_divisor(self):
        model = NullModel(divisor=85.0, name="modified_null")
        assert model.predict("a", "b", 85, 0) == 1.0
        # one point moves the estimate by 100 / (85 * 2) percentage points
        delta = model.predict("a", "b", 1, 0) - 0.5
        assert delta == pytest.approx(1 / 170, abs=1e-15)

    def test_orientation_complement(self):
        model = NullModel()
        source = RandomSource(2)
        for _ in range(200):
            s1 = int(source.next_float() * 350)
            s2 = int(source.next_float() * 350)
            total = model.predict("a", "b", s1, s2) + model.predict("b", "a", s2, s1)
            assert abs(total - 1.0) <= 1e-9

    def test_rejects_bad_divisor(self):
        with pytest.raises(ValueError):
            NullModel(divisor=0)


def match(game_id, start, winner_first_rounds, loser_rounds, p_win, p_lose):
    """A game where `p_win` beats `p_lose` (players given in record orientation)."""
    p1, p2 = sorted((p_win, p_lose))
    rounds = []
    for w_round, l_round in zip(winner_first_rounds, loser_rounds):
        if p1 == p_win:
            rounds.append(RoundScores(w_round, l_round))
        else:
            rounds.append(RoundScores(l_round, w_round))
    return GameRecord(game_id, start, p1, p2, tuple(rounds))


def domination_dataset(n_games=12):
    """A always beats B with the same trajectory."""
    start = datetime(2025, 2, 1, 10, 0)
    games = []
    for k in range(n_games):
        games.append(
            match(
                f"g{k}",
                start + timedelta(days=k),
                [(60, 60, 30), (60, 60, 30)],
                [(20, 20, 10), (20, 20, 10)],
                "A",
                "B",
            )
        )
    return Dataset(tuple(games), frozenset({"A", "B"}))


class TestLogisticModel:
    def test_dominating_player_gets_larger_coefficient(self):
        model = fit_logistic_model(domination_dataset(), l2=1e-2)
        assert model.player_coefficients["A"] > model.player_coefficients["B"]
        assert model.predict("A", "B", 0, 0) > 0.5

    def test_mirroring_forces_symmetry(self, small_season_dataset):
        from darts271.dataset import split

        cutoff = sorted(g.start_time for g in small_season_dataset.games)[80]
        train, _ = split(small_season_dataset, cutoff)
        model = fit_logistic_model(train, l2=1e-3)
        assert abs(model.c0) <= 1e-6
        assert abs(model.c1 + model.c2) <= 1e-6

    def test_round_one_prediction_uses_only_player_coefficients(self):
        model = fit_logistic_model(domination_dataset(), l2=1e-2)
        z = model.player_coefficients["A"] - model.player_coefficients["B"] + model.c0
        expected = 1.0 / (1.0 + math.exp(-z))
        assert model.predict("A", "B", 0, 0) == pytest.approx(expected, abs=1e-15)

    def test_unseen_players_get_zero_coefficient(self):
        model = fit_logistic_model(domination_dataset(), l2=1e-2)
        assert model.predict("X", "Y", 0, 0) == pytest.approx(0.5, abs=1e-9)

    def test_orientation_complement(self, small_bundle):
        model = small_bundle.logistic
        players = sorted(small_bundle.roster)
        source = RandomSource(6)
        for _ in range(200):
            p1 = players[int(source.next_float() * len(players))]
            p2 = players[int(source.next_float() * len(players))]
            s1 = int(source.next_float() * 300)
            s2 = int(source.next_float() * 300)
            total = model.predict(p1, p2, s1, s2) + model.predict(p2, p1, s2, s1)
            assert abs(total - 1.0) <= 1e-9

    def test_planted_score_coefficient_recovered(self):
        # Games whose winner is drawn from a logistic law over round-two
        # totals; closing rounds end the game immediately, so the only
        # observations are (0, 0) and the planted-state round.
        planted_c1 = 0.03
        rng = np.random.default_rng(21)
        high_values = sorted(v for v in VALID_SCORES if v >= 32)
        start = datetime(2025, 2, 1, 10, 0)
        games = []
        for k in range(4000):
            t1 = tuple(int(v) for v in rng.choice(high_values, size=3))
            t2 = tuple(int(v) for v in rng.choice(high_values, size=3))
            s1, s2 = sum(t1), sum(t2)
            p_first_wins = 1.0 / (1.0 + math.exp(-planted_c1 * (s1 - s2)))
            first_wins = rng.uniform() < p_first_wins
            closer_win = (60, 60, 60)
            closer_loss = (0, 0, 0)
            rounds = (
                RoundScores(t1, t2),
                RoundScores(closer_win, closer_loss)
                if first_wins
                else RoundScores(closer_loss, closer_win),
            )
            games.append(
                GameRecord(f"g{k}", start + timedelta(minutes=k), "A", "B", tuple(rounds))
            )
        train = Dataset(tuple(games), frozenset({"A", "B"}))
        model = fit_logistic_model(train, l2=1e-3)
        assert abs(model.c1 - planted_c1) / planted_c1 < 0.10
        assert abs(model.c2 + planted_c1) / planted_c1 < 0.10
