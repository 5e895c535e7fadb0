"""Shared fixtures: the worked-example game, small seasons, CSV builders."""

import io
from datetime import datetime

import pytest

from darts271.config import Config
from darts271.core import GameRecord, RoundScores
from darts271.dataset import Dataset, parse_csv, serialize_csv
from darts271.models import fit_bundle
from darts271.synthgen import SeasonPlan, default_profiles, generate_season

SEASON_START = datetime(2025, 1, 6, 12, 0)
SEASON_END = datetime(2025, 4, 28, 20, 0)


def example_game() -> GameRecord:
    """Alice vs Bob: 100-120 after round 1, 250-275 final, Bob wins."""
    return GameRecord(
        game_id="example1",
        start_time=datetime(2025, 2, 10, 17, 30),
        p1="Alice",
        p2="Bob",
        rounds=(
            RoundScores((60, 20, 20), (60, 40, 20)),
            RoundScores((60, 60, 30), (57, 60, 38)),
        ),
    )


@pytest.fixture
def alice_bob_game() -> GameRecord:
    return example_game()


@pytest.fixture
def alice_bob_dataset(alice_bob_game) -> Dataset:
    return Dataset((alice_bob_game,), frozenset({"Alice", "Bob"}))


def dataset_to_csv(dataset: Dataset) -> str:
    return serialize_csv(dataset)


def csv_to_dataset(text: str, **kwargs) -> Dataset:
    return parse_csv(io.StringIO(text), **kwargs)


def small_season(n_players=6, n_games=120, seed=9):
    plan = SeasonPlan(
        players=default_profiles(n_players, seed=seed),
        n_games=n_games,
        start=SEASON_START,
        end=SEASON_END,
        seed=seed,
    )
    dataset, _ = generate_season(plan, include_ground_truth=False)
    return plan, dataset


@pytest.fixture(scope="session")
def small_season_dataset() -> Dataset:
    return small_season()[1]


@pytest.fixture(scope="session")
def small_bundle(small_season_dataset):
    """All five models fitted on a quick 6-player season (cheap n_sims)."""
    config = Config(cutoff_quantile=0.7, seed=9, n_sims=200)
    return fit_bundle(small_season_dataset, config)
