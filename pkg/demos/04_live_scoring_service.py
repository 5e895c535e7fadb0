"""Drive the live-scoring HTTP API in process and watch probabilities move.

Run with:  python demos/04_live_scoring_service.py
"""

from datetime import datetime

from fastapi.testclient import TestClient

from darts271.config import Config
from darts271.models import fit_bundle
from darts271.service import create_app
from darts271.synthgen import SeasonPlan, default_profiles, generate_season

plan = SeasonPlan(
    players=default_profiles(4, seed=3),
    n_games=80,
    start=datetime(2025, 1, 6, 12, 0),
    end=datetime(2025, 4, 28, 20, 0),
    seed=3,
)
dataset, _ = generate_season(plan, include_ground_truth=False)
bundle = fit_bundle(dataset, Config(cutoff_quantile=0.7, seed=3, n_sims=300))
client = TestClient(create_app(bundle))

roster = client.get("/api/players").json()["players"]
print("roster:")
for entry in roster:
    print(f"  {entry['player']}: {entry['games']} games, "
          f"win rate {entry['win_rate']:.2f}, {entry['avg_points_per_throw']:.1f} pts/throw")

p1, p2 = roster[0]["player"], roster[-1]["player"]
game = client.post("/api/games", json={"p1": p1, "p2": p2}).json()
game_id = game["game_id"]
print(f"\nnew game {game_id}: {p1} vs {p2}")
print("initial probabilities:",
      {k: round(v, 3) for k, v in game["probabilities"].items()})

rounds = [
    {"p1_throws": [60, 20, 20], "p2_throws": [60, 40, 20], "round_index": 1},
    {"p1_throws": [60, 60, 30], "p2_throws": [57, 60, 38], "round_index": 2},
]
for payload in rounds:
    body = client.post(f"/api/games/{game_id}/rounds", json=payload).json()
    if body["terminal"]:
        print(f"round {body['round_number']}: totals {body['totals']} -> "
              f"{body['winner']} wins")
    else:
        print(f"round {body['round_number']}: totals {body['totals']}",
              {k: round(v, 3) for k, v in body["probabilities"].items()})

late = client.post(
    f"/api/games/{game_id}/rounds",
    json={"p1_throws": [0, 0, 0], "p2_throws": [0, 0, 0]},
)
print(f"\nsubmitting after the finish: HTTP {late.status_code} "
      f"({late.json()['code']})")

view = client.get(f"/api/games/{game_id}").json()
print(f"history carries {len(view['history'])} states "
      "(initial plus one per round) for the by-round chart")
