"""Empirical distributions, the Monte Carlo engine, and basic-sim predictions."""

import pytest

from darts271.core import GameRules
from darts271.dataset import split
from darts271.models import (
    EmpiricalThrowDistribution,
    SimOutcome,
    empirical_distribution,
    fit_basic_sim,
    simulate_remaining,
    win_probability_batch,
)
from darts271.models.simulation import league_distribution
from darts271.numerics import RandomSource, substream_keys


def constant(value: int) -> EmpiricalThrowDistribution:
    return EmpiricalThrowDistribution((value,), (1.0,))


class TestEmpiricalThrowDistribution:
    def test_counting(self):
        dist = EmpiricalThrowDistribution.from_throws([20, 20, 0, 60])
        assert dist.probability_of(20) == 0.5
        assert dist.probability_of(0) == 0.25
        assert dist.probability_of(60) == 0.25
        assert dist.probability_of(40) == 0.0

    def test_rejects_illegal_support(self):
        with pytest.raises(ValueError):
            EmpiricalThrowDistribution((23,), (1.0,))
        with pytest.raises(ValueError):
            EmpiricalThrowDistribution((20,), (0.5,))

    def test_unseen_player_gets_league_pool(self, small_season_dataset):
        cutoff = sorted(g.start_time for g in small_season_dataset.games)[60]
        train, _ = split(small_season_dataset, cutoff)
        stranger = empirical_distribution(train, "nobody-here")
        assert stranger == league_distribution(train)

    def test_player_distribution_matches_throw_counts(self, small_season_dataset):
        player = sorted(small_season_dataset.roster)[0]
        throws = small_season_dataset.throws_by_player()[player]
        dist = empirical_distribution(small_season_dataset, player)
        assert dist.probability_of(throws[0]) > 0
        assert sum(dist.probabilities) == pytest.approx(1.0, abs=1e-12)


class TestSimulateRemaining:
    def test_deterministic_sweep(self):
        source = RandomSource(1)
        outcome = simulate_remaining(
            constant(60).sampler(), constant(0).sampler(), 0, 0, source
        )
        assert outcome == SimOutcome.P1_WINS

    def test_perpetual_tie_hits_round_cap(self):
        source = RandomSource(1)
        outcome = simulate_remaining(
            constant(60).sampler(), constant(60).sampler(), 0, 0, source, round_cap=50
        )
        assert outcome == SimOutcome.UNRESOLVED

    def test_trailing_thrower_overtakes(self):
        # p1 sits at 270 and never scores; p2 scores 171 per round and first
        # crosses the threshold with the lead at round two
        source = RandomSource(1)
        outcome = simulate_remaining(
            constant(0).sampler(), constant(57).sampler(), 270, 0, source
        )
        assert outcome == SimOutcome.P2_WINS

    def test_exclusive_threshold_rules(self):
        rules = GameRules(inclusive=False)
        source = RandomSource(1)
        # 271 exactly is not enough when the threshold is exclusive
        state_draws = constant(0).sampler()
        outcome = simulate_remaining(
            state_draws, constant(0).sampler(), 271, 100, source, rules=rules, round_cap=5
        )
        assert outcome == SimOutcome.UNRESOLVED


class TestBatchEngineParity:
    def test_vectorized_matches_sequential(self, small_season_dataset):
        players = sorted(small_season_dataset.roster)
        d1 = empirical_distribution(small_season_dataset, players[0])
        d2 = empirical_distribution(small_season_dataset, players[1])
        master = RandomSource(33)
        keys = substream_keys(master.key, 200)
        batch = win_probability_batch(d1.sampler(), d2.sampler(), 50, 80, keys)
        expect = {
            SimOutcome.P1_WINS: 1.0,
            SimOutcome.P2_WINS: 0.0,
            SimOutcome.UNRESOLVED: 0.5,
        }
        for i in range(200):
            outcome = simulate_remaining(
                d1.sampler(), d2.sampler(), 50, 80, master.substream(i)
            )
            assert batch[i] == expect[outcome], f"replica {i}"


class TestSimPredict:
    def model(self, dataset, n_sims=1000, seed=4):
        return fit_basic_sim(dataset, n_sims=n_sims, seed=seed)

    def test_terminal_states_short_circuit(self, small_season_dataset):
        model = self.model(small_season_dataset)
        a, b = sorted(small_season_dataset.roster)[:2]
        assert model.predict(a, b, 300, 100) == 1.0
        assert model.predict(a, b, 100, 300) == 0.0

    def test_deterministic_domination(self):
        from darts271.models import BasicSimModel

        model = BasicSimModel(
            distributions={"A": constant(60), "B": constant(0)},
            league=constant(20),
            n_sims=500,
            seed=9,
        )
        assert model.predict("A", "B", 0, 0) == 1.0
        assert model.predict("B", "A", 0, 0) == 0.0

    def test_unresolved_counts_half(self):
        from darts271.models import BasicSimModel

        model = BasicSimModel(
            distributions={"A": constant(60), "B": constant(60)},
            league=constant(20),
            n_sims=100,
            seed=9,
            round_cap=20,
        )
        assert model.predict("A", "B", 0, 0) == 0.5

    def test_equal_players_near_half(self, small_season_dataset):
        model = self.model(small_season_dataset, n_sims=1000)
        player = sorted(small_season_dataset.roster)[0]
        dist = model.distributions[player]
        from darts271.models import BasicSimModel

        twin = BasicSimModel(
            distributions={"L": dist, "R": dist},
            league=model.league,
            n_sims=1000,
            seed=13,
        )
        p = twin.predict("L", "R", 0, 0)
        assert abs(p - 0.5) <= 3 * (0.25 / 1000) ** 0.5  # 3-sigma binomial band

    def test_bit_identical_given_seed(self, small_season_dataset):
        a, b = sorted(small_season_dataset.roster)[:2]
        m1 = self.model(small_season_dataset, seed=77)
        m2 = self.model(small_season_dataset, seed=77)
        states = [(0, 0), (100, 120), (250, 200), (280, 280)]
        for s1, s2 in states:
            assert m1.predict(a, b, s1, s2) == m2.predict(a, b, s1, s2)
        m3 = self.model(small_season_dataset, seed=78)
        assert any(
            m1.predict(a, b, s1, s2) != m3.predict(a, b, s1, s2) for s1, s2 in states
        )

    def test_shared_replica_complementarity(self, small_season_dataset):
        model = self.model(small_season_dataset, n_sims=300)
        players = sorted(small_season_dataset.roster)
        source = RandomSource(14)
        for _ in range(30):
            p1 = players[int(source.next_float() * len(players))]
            p2 = players[int(source.next_float() * len(players))]
            if p1 == p2:
                continue
            s1 = int(source.next_float() * 300)
            s2 = int(source.next_float() * 300)
            total = model.predict(p1, p2, s1, s2) + model.predict(p2, p1, s2, s1)
            assert abs(total - 1.0) <= 1e-12

    def test_self_matchup_complement_via_score_tiebreak(self, small_season_dataset):
        model = self.model(small_season_dataset, n_sims=200)
        player = sorted(small_season_dataset.roster)[0]
        total = model.predict(player, player, 40, 90) + model.predict(player, player, 90, 40)
        assert total == 1.0


@pytest.mark.slow
class TestConvergence:
    def test_large_replica_stability(self, small_season_dataset):
        players = sorted(small_season_dataset.roster)
        d1 = empirical_distribution(small_season_dataset, players[0])
        d2 = empirical_distribution(small_season_dataset, players[1])
        key = RandomSource(55).key
        p_100k = win_probability_batch(
            d1.sampler(), d2.sampler(), 60, 30, substream_keys(key, 100_000)
        ).mean()
        p_1m = win_probability_batch(
            d1.sampler(), d2.sampler(), 60, 30, substream_keys(key, 1_000_000, offset=200_000)
        ).mean()
        assert abs(p_100k - p_1m) < 0.005
