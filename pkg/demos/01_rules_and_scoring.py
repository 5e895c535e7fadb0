"""Walk through the scoring rules and the game-state machine.

Run with:  python demos/01_rules_and_scoring.py
"""

from darts271.core import (
    DistanceCategory,
    GameState,
    RoundScores,
    VALID_SCORES,
    apply_round,
    classify_distance,
    validate_score,
    winner,
)
from darts271.core import GameRecord
from datetime import datetime

print("=== Legal single-throw scores ===")
print(f"{len(VALID_SCORES)} reachable values:")
print(sorted(VALID_SCORES))
print()

print("57 is legal (triple 19):", validate_score(57))
try:
    validate_score(23)
except Exception as err:
    print("23 is rejected:", err)
print()

print("=== Accuracy categories (relative to the 19/20 target sectors) ===")
for category in DistanceCategory:
    members = [v for v in sorted(VALID_SCORES) if classify_distance(v) == category]
    print(f"{category.name:>10}: {members}")
print()

print("=== Playing a game ===")
state = GameState("Alice", "Bob")
rounds = [
    RoundScores((60, 20, 20), (60, 40, 20)),   # 100 vs 120
    RoundScores((60, 60, 30), (57, 60, 38)),   # 250 vs 275 -> Bob leads past 271
]
for number, rnd in enumerate(rounds, start=1):
    state = apply_round(state, rnd)
    status = "game over" if state.terminal else "play on"
    print(f"after round {number}: {state.s1:>3} - {state.s2:>3}  ({status})")

record = GameRecord("demo", datetime(2025, 2, 10, 17, 30), "Alice", "Bob", tuple(rounds))
print("winner:", winner(record))
print()

print("=== Ties above the threshold keep the game alive ===")
state = GameState("Alice", "Bob", 280, 280, rounds_played=5)
print(f"280 - 280: terminal? {state.terminal}")
state = apply_round(state, RoundScores((1, 0, 0), (0, 0, 0)))
print(f"281 - 280: terminal? {state.terminal}, winner {state.leader}")
