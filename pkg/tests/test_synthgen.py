"""Synthetic season generation and its planted ground truth."""

from datetime import datetime

import pytest

from darts271.core import DistanceCategory, VALID_SCORES, classify_distance, winner
from darts271.dataset import serialize_csv, summarize
from darts271.models.simulation import win_probability_batch
from darts271.numerics import RandomSource, substream_keys
from darts271.synthgen import (
    GenerationError,
    PlanError,
    SeasonPlan,
    SkillProfile,
    default_profiles,
    generate_season,
    profile_to_distribution,
)

from conftest import SEASON_END, SEASON_START, csv_to_dataset


AT = datetime(2025, 3, 1, 12, 0)


def d0_mass(dist):
    return sum(
        p for s, p in zip(dist.support, dist.probabilities)
        if classify_distance(s) == DistanceCategory.DISTANCE_0
    )


class TestProfileToDistribution:
    def test_perfect_accuracy_hits_target_rings_only(self):
        dist = profile_to_distribution(SkillProfile("p", "sector20", 1.0, 0.0, 0.0), AT)
        assert set(dist.support) <= {20, 40, 60}

    def test_certain_miss(self):
        dist = profile_to_distribution(SkillProfile("p", "sector20", 0.5, 0.0, 1.0), AT)
        assert dist.support == (0,)
        assert dist.probabilities == (1.0,)

    def test_support_is_board_legal_and_normalized(self):
        for target in ("sector20", "sector19", "bullseye"):
            dist = profile_to_distribution(SkillProfile("p", target, 0.37, 0.0, 0.12), AT)
            assert set(dist.support) <= VALID_SCORES
            assert sum(dist.probabilities) == pytest.approx(1.0, abs=1e-12)

    def test_accuracy_strictly_increases_target_family_mass(self):
        for target in ("sector20", "sector19"):
            low = profile_to_distribution(SkillProfile("p", target, 0.5, 0.0, 0.1), AT)
            high = profile_to_distribution(SkillProfile("p", target, 0.6, 0.0, 0.1), AT)
            assert d0_mass(high) > d0_mass(low)

    def test_bullseye_accuracy_increases_bull_mass(self):
        low = profile_to_distribution(SkillProfile("p", "bullseye", 0.5, 0.0, 0.1), AT)
        high = profile_to_distribution(SkillProfile("p", "bullseye", 0.6, 0.0, 0.1), AT)
        bull = lambda d: d.probability_of(25) + d.probability_of(50)
        assert bull(high) > bull(low)

    def test_drift_needs_anchor(self):
        profile = SkillProfile("p", "sector20", 0.3, 0.001, 0.1)
        with pytest.raises(PlanError):
            profile_to_distribution(profile, AT)
        anchored = SkillProfile("p", "sector20", 0.3, 0.001, 0.1, anchor=SEASON_START)
        drifted = profile_to_distribution(anchored, SEASON_END)
        baseline = profile_to_distribution(anchored, SEASON_START)
        assert d0_mass(drifted) > d0_mass(baseline)

    def test_accuracy_clamps_at_bounds(self):
        anchored = SkillProfile("p", "sector20", 0.9, 0.01, 0.0, anchor=SEASON_START)
        assert anchored.accuracy_at(SEASON_END) == 1.0


class TestPlanValidation:
    def test_needs_two_players(self):
        with pytest.raises(PlanError):
            SeasonPlan((SkillProfile("solo"),), 10, SEASON_START, SEASON_END, seed=1)

    def test_needs_enough_games_for_coverage(self):
        players = default_profiles(10)
        with pytest.raises(PlanError):
            SeasonPlan(players, 4, SEASON_START, SEASON_END, seed=1)

    def test_duplicate_players_rejected(self):
        twins = (SkillProfile("x"), SkillProfile("x"))
        with pytest.raises(PlanError):
            SeasonPlan(twins, 10, SEASON_START, SEASON_END, seed=1)


class TestGenerateSeason:
    def test_deterministic_csv(self):
        plan = SeasonPlan(default_profiles(4, seed=2), 30, SEASON_START, SEASON_END, seed=2)
        a, _ = generate_season(plan, include_ground_truth=False)
        b, _ = generate_season(plan, include_ground_truth=False)
        assert serialize_csv(a) == serialize_csv(b)
        other = SeasonPlan(default_profiles(4, seed=2), 30, SEASON_START, SEASON_END, seed=3)
        c, _ = generate_season(other, include_ground_truth=False)
        assert serialize_csv(a) != serialize_csv(c)

    def test_every_player_appears(self):
        plan = SeasonPlan(default_profiles(9, seed=7), 5, SEASON_START, SEASON_END, seed=7)
        dataset, _ = generate_season(plan, include_ground_truth=False)
        seen = set()
        for g in dataset.games:
            seen.update((g.p1, g.p2))
        assert seen == {p.player for p in plan.players}

    def test_generated_seasons_pass_ingest_validation_100_seeds(self):
        for seed in range(100):
            plan = SeasonPlan(
                default_profiles(4, seed=seed), 10, SEASON_START, SEASON_END, seed=seed
            )
            dataset, _ = generate_season(plan, include_ground_truth=False)
            reparsed = csv_to_dataset(serialize_csv(dataset))
            assert reparsed.games == dataset.games
            assert reparsed.roster == dataset.roster

    def test_round_counts_in_plausible_band(self):
        plan = SeasonPlan(default_profiles(20, seed=6), 200, SEASON_START, SEASON_END, seed=6)
        dataset, _ = generate_season(plan, include_ground_truth=False)
        stats = summarize(dataset)
        assert 3.0 <= stats.mean_rounds_per_game <= 15.0
        for game in dataset.games:
            assert game.final_state().terminal

    def test_dominant_player_wins_nearly_everything(self):
        profiles = (
            SkillProfile("star", "sector20", 0.9, 0.0, 0.02),
            SkillProfile("rook1", "sector19", 0.3, 0.0, 0.25),
            SkillProfile("rook2", "sector20", 0.3, 0.0, 0.25),
        )
        plan = SeasonPlan(profiles, 120, SEASON_START, SEASON_END, seed=17)
        dataset, _ = generate_season(plan, include_ground_truth=False)
        star_games = [g for g in dataset.games if "star" in (g.p1, g.p2)]
        wins = sum(1 for g in star_games if winner(g) == "star")
        assert wins / len(star_games) > 0.9

    def test_degenerate_profiles_raise(self):
        hopeless = (
            SkillProfile("a", "sector20", 0.0, 0.0, 1.0),
            SkillProfile("b", "sector20", 0.0, 0.0, 1.0),
        )
        plan = SeasonPlan(hopeless, 5, SEASON_START, SEASON_END, seed=1)
        with pytest.raises(GenerationError):
            generate_season(plan, include_ground_truth=False)

    def test_timestamps_increase_within_season(self):
        plan = SeasonPlan(default_profiles(4, seed=2), 50, SEASON_START, SEASON_END, seed=2)
        dataset, _ = generate_season(plan, include_ground_truth=False)
        times = [g.start_time for g in dataset.games]
        assert times == sorted(times)
        assert times[0] > SEASON_START and times[-1] < SEASON_END


class TestGroundTruth:
    def test_payload_shape_and_determinism(self):
        plan = SeasonPlan(default_profiles(3, seed=4), 12, SEASON_START, SEASON_END, seed=4)
        _, truth_a = generate_season(plan, truth_replicas=2000)
        _, truth_b = generate_season(plan, truth_replicas=2000)
        assert truth_a == truth_b
        names = sorted(p.player for p in plan.players)
        pairs = truth_a["pairwise_p1_win_probability"]
        assert set(pairs) == set(names[:-1])
        for a, row in pairs.items():
            for b, p in row.items():
                assert a < b
                assert 0.0 <= p <= 1.0

    def test_oracle_complementarity(self):
        profiles = (
            SkillProfile("a", "sector20", 0.55, 0.0, 0.1),
            SkillProfile("b", "sector19", 0.35, 0.0, 0.15),
        )
        sampler_a = profile_to_distribution(profiles[0], AT).sampler()
        sampler_b = profile_to_distribution(profiles[1], AT).sampler()
        replicas = 50_000
        p_ab = win_probability_batch(
            sampler_a, sampler_b, 0, 0, substream_keys(RandomSource(3).key, replicas)
        ).mean()
        p_ba = win_probability_batch(
            sampler_b, sampler_a, 0, 0,
            substream_keys(RandomSource(4).key, replicas, offset=replicas),
        ).mean()
        assert 0.99 <= p_ab + p_ba <= 1.01
