"""Live-scoring API: game lifecycle, validation, idempotence, persistence."""

import io
import threading

import pytest
from fastapi.testclient import TestClient

from darts271.dataset import parse_csv
from darts271.models import (
    EmpiricalThrowDistribution,
    LogisticModel,
    ModelBundle,
    NullModel,
    SdmmModel,
    SdmmRatings,
    BasicSimModel,
    AdjustedSimModel,
    DistanceVector,
    MultiplierVector,
)
from darts271.config import Config
from darts271.service import ApiError, LiveStore, _game_seed, create_app


@pytest.fixture(scope="module")
def client(small_bundle):
    return TestClient(create_app(small_bundle))


@pytest.fixture(scope="module")
def roster(small_bundle):
    return sorted(small_bundle.roster)


def new_game(client, roster):
    response = client.post("/api/games", json={"p1": roster[0], "p2": roster[1]})
    assert response.status_code == 201
    return response.json()


class TestHealthAndRoster:
    def test_health_reports_bundle_metadata(self, client, small_bundle):
        body = client.get("/api/health").json()
        assert body["status"] == "ok"
        assert body["schema_version"] == small_bundle.schema_version
        assert sorted(body["models"]) == sorted(small_bundle.models())
        assert body["players"] == len(small_bundle.roster)

    def test_players_match_bundle_stats(self, client, small_bundle):
        players = client.get("/api/players").json()["players"]
        assert [p["player"] for p in players] == sorted(small_bundle.roster)
        for entry in players:
            stats = small_bundle.roster_stats[entry["player"]]
            assert entry["games"] == stats["games"]
            assert entry["win_rate"] == stats["win_rate"]
            assert entry["avg_points_per_throw"] >= 0.0

    def test_empty_roster_bundle(self):
        placeholder = EmpiricalThrowDistribution((0, 20), (0.5, 0.5))
        config = Config(cutoff="2025-04-01T00:00")
        bundle = ModelBundle(
            cutoff=config.cutoff,
            config=config,
            null=NullModel(),
            logistic=LogisticModel(0.0, 0.0, 0.0, {}),
            basic_sim=BasicSimModel({}, placeholder, n_sims=50, seed=1),
            adjusted_sim=AdjustedSimModel(
                {}, {}, DistanceVector((0.25, 0.25, 0.25, 0.25)),
                MultiplierVector((0.25, 0.25, 0.25, 0.25)),
                reference_time=config.cutoff,
                n_sims=50, seed=1,
            ),
            sdmm=SdmmModel(SdmmRatings({}, {})),
            roster_stats={},
        )
        with TestClient(create_app(bundle)) as c:
            assert c.get("/api/players").json()["players"] == []


class TestCreateGame:
    def test_create_returns_initial_probabilities(self, client, roster):
        body = new_game(client, roster)
        assert set(body["probabilities"]) == {
            "null", "logistic", "basic_sim", "adjusted_sim", "sdmm"
        }
        assert body["probabilities"]["null"] == 0.5

    def test_same_player_rejected(self, client, roster):
        response = client.post("/api/games", json={"p1": roster[0], "p2": roster[0]})
        assert response.status_code == 400
        assert response.json()["code"] == "SamePlayer"

    def test_unknown_player_rejected_in_strict_mode(self, client, roster):
        response = client.post("/api/games", json={"p1": roster[0], "p2": "stranger"})
        assert response.status_code == 404
        assert response.json()["code"] == "UnknownPlayer"

    def test_open_roster_mode_allows_strangers(self, small_bundle):
        open_client = TestClient(create_app(small_bundle, strict_roster=False))
        response = open_client.post("/api/games", json={"p1": "x", "p2": "y"})
        assert response.status_code == 201


class TestRounds:
    def test_example_game_flow(self, client, roster):
        game_id = new_game(client, roster)["game_id"]

        r1 = client.post(
            f"/api/games/{game_id}/rounds",
            json={"p1_throws": [60, 20, 20], "p2_throws": [60, 40, 20], "round_index": 1},
        )
        assert r1.status_code == 200
        body = r1.json()
        assert body["totals"] == [100, 120]
        assert body["terminal"] is False
        assert 0.0 <= body["probabilities"]["sdmm"] <= 1.0

        r2 = client.post(
            f"/api/games/{game_id}/rounds",
            json={"p1_throws": [60, 60, 30], "p2_throws": [57, 60, 38], "round_index": 2},
        )
        body = r2.json()
        assert body["totals"] == [250, 275]
        assert body["terminal"] is True
        assert body["winner"] == roster[1]
        assert "probabilities" not in body

        r3 = client.post(
            f"/api/games/{game_id}/rounds",
            json={"p1_throws": [0, 0, 0], "p2_throws": [0, 0, 0]},
        )
        assert r3.status_code == 409
        assert r3.json()["code"] == "GameAlreadyOver"

    def test_invalid_score_position_reported(self, client, roster):
        game_id = new_game(client, roster)["game_id"]
        response = client.post(
            f"/api/games/{game_id}/rounds",
            json={"p1_throws": [60, 23, 20], "p2_throws": [0, 0, 0]},
        )
        assert response.status_code == 422
        body = response.json()
        assert body["code"] == "InvalidScore"
        assert body["detail"]["position"] == "p1_throws[1]"
        assert body["detail"]["value"] == 23
        # no state change
        game = client.get(f"/api/games/{game_id}").json()
        assert game["totals"] == [0, 0]

    def test_duplicate_round_index_rejected(self, client, roster):
        game_id = new_game(client, roster)["game_id"]
        payload = {"p1_throws": [20, 20, 20], "p2_throws": [5, 5, 5], "round_index": 1}
        assert client.post(f"/api/games/{game_id}/rounds", json=payload).status_code == 200
        again = client.post(f"/api/games/{game_id}/rounds", json=payload)
        assert again.status_code == 409
        assert again.json()["code"] == "DuplicateRound"
        ahead = client.post(
            f"/api/games/{game_id}/rounds",
            json={"p1_throws": [20, 20, 20], "p2_throws": [5, 5, 5], "round_index": 7},
        )
        assert ahead.status_code == 409
        assert ahead.json()["code"] == "RoundOutOfOrder"

    def test_unknown_game(self, client):
        response = client.post(
            "/api/games/nope/rounds", json={"p1_throws": [0, 0, 0], "p2_throws": [0, 0, 0]}
        )
        assert response.status_code == 404
        assert response.json()["code"] == "NoSuchGame"


class TestGameView:
    def test_history_includes_initial_state(self, client, roster):
        game_id = new_game(client, roster)["game_id"]
        client.post(
            f"/api/games/{game_id}/rounds",
            json={"p1_throws": [60, 20, 20], "p2_throws": [60, 40, 20]},
        )
        view = client.get(f"/api/games/{game_id}").json()
        assert len(view["history"]) == 2
        assert view["history"][0]["round_number"] == 0
        assert view["history"][0]["totals"] == [0, 0]

    def test_history_probabilities_reproducible(self, client, roster, small_bundle):
        game_id = new_game(client, roster)["game_id"]
        client.post(
            f"/api/games/{game_id}/rounds",
            json={"p1_throws": [60, 20, 20], "p2_throws": [60, 40, 20]},
        )
        view = client.get(f"/api/games/{game_id}").json()
        seed = _game_seed(small_bundle.config.seed, game_id)
        models = dict(small_bundle.models())
        models["basic_sim"] = models["basic_sim"].with_seed(seed)
        models["adjusted_sim"] = models["adjusted_sim"].with_seed(seed)
        for entry in view["history"]:
            s1, s2 = entry["totals"]
            for name, model in models.items():
                assert entry["probabilities"][name] == model.predict(
                    roster[0], roster[1], s1, s2
                )

    def test_terminal_history_keeps_final_probabilities(self, client, roster):
        game_id = new_game(client, roster)["game_id"]
        client.post(
            f"/api/games/{game_id}/rounds",
            json={"p1_throws": [60, 60, 60], "p2_throws": [0, 0, 0]},
        )
        client.post(
            f"/api/games/{game_id}/rounds",
            json={"p1_throws": [60, 60, 60], "p2_throws": [0, 0, 0]},
        )
        view = client.get(f"/api/games/{game_id}").json()
        assert view["terminal"] is True
        assert view["winner"] == roster[0]
        assert len(view["history"]) == 3
        final = view["history"][-1]
        assert final["winner"] == roster[0]
        assert final["probabilities"]["basic_sim"] == 1.0

    def test_missing_game_404(self, client):
        assert client.get("/api/games/ghost").status_code == 404


class TestJournal:
    def test_restart_replays_state(self, small_bundle, tmp_path, roster):
        journal = tmp_path / "journal.jsonl"
        with TestClient(create_app(small_bundle, journal_path=str(journal))) as c:
            game_id = c.post(
                "/api/games", json={"p1": roster[0], "p2": roster[1]}
            ).json()["game_id"]
            c.post(
                f"/api/games/{game_id}/rounds",
                json={"p1_throws": [60, 20, 20], "p2_throws": [60, 40, 20]},
            )
            before = c.get(f"/api/games/{game_id}").json()

        with TestClient(create_app(small_bundle, journal_path=str(journal))) as c:
            after = c.get(f"/api/games/{game_id}").json()
        assert after == before

    def test_export_round_trips_through_ingest(self, small_bundle, tmp_path, roster):
        with TestClient(create_app(small_bundle)) as c:
            game_id = c.post(
                "/api/games", json={"p1": roster[0], "p2": roster[1]}
            ).json()["game_id"]
            c.post(
                f"/api/games/{game_id}/rounds",
                json={"p1_throws": [60, 60, 60], "p2_throws": [20, 20, 10]},
            )
            c.post(
                f"/api/games/{game_id}/rounds",
                json={"p1_throws": [60, 60, 60], "p2_throws": [20, 20, 10]},
            )
            text = c.get("/api/export.csv").text
        dataset = parse_csv(io.StringIO(text))
        assert len(dataset.games) == 1
        game = dataset.games[0]
        assert game.final_state().terminal
        assert {game.p1, game.p2} == {roster[0], roster[1]}


class TestConcurrency:
    def test_one_writer_per_round_index(self, small_bundle, roster):
        store = LiveStore(small_bundle, strict_roster=True)
        game = store.create_game(roster[0], roster[1])
        results = []

        def submit():
            try:
                store.submit_round(
                    game.game_id,
                    {"p1_throws": [20, 20, 20], "p2_throws": [5, 5, 5], "round_index": 1},
                )
                results.append("ok")
            except ApiError as err:
                results.append(err.code)

        threads = [threading.Thread(target=submit) for _ in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert results.count("ok") == 1
        assert results.count("DuplicateRound") == 7
        assert game.state.rounds_played == 1
