"""The five models' arithmetic on small worked examples.

Run with:  python demos/02_models_on_worked_examples.py
"""

from darts271.evaluation import (
    PredictionInstance,
    PredictionTrace,
    betting_game,
    betting_payout,
)
from darts271.models import NullModel, SdmmRatings, build_sdmm_system, sdmm_predict
from darts271.dataset import Dataset
from darts271.core import GameRecord, RoundScores
from datetime import datetime

print("=== Null model: the lead is the whole story ===")
null = NullModel()
print("75 - 45 lead:     ", null.predict("p1", "p2", 75, 45))
print("tied at 150:      ", null.predict("p1", "p2", 150, 150))
print("150-point blowout:", null.predict("p1", "p2", 200, 50))
print("modified (div 85):", NullModel(85.0).predict("p1", "p2", 75, 45))
print()

print("=== Score-dependent ratings ===")
ratings = SdmmRatings({"Alice": -1.3, "Bob": -1.4}, {"Alice": 1.7, "Bob": 1.8})
print("Alice starts favored:      ", sdmm_predict(ratings, "Alice", "Bob", 0, 0))
print("at 100-120 Bob takes over: ", round(sdmm_predict(ratings, "Alice", "Bob", 100, 120), 6))
print()

print("=== The equations one game contributes ===")
game = GameRecord(
    "demo", datetime(2025, 2, 10, 17, 30), "Alice", "Bob",
    (RoundScores((60, 20, 20), (60, 40, 20)), RoundScores((60, 60, 30), (57, 60, 38))),
)
built = build_sdmm_system(Dataset((game,), frozenset({"Alice", "Bob"})))
labels = ["r_Alice^(1)", "r_Bob^(1)", "r_Alice^(2)", "r_Bob^(2)"]
order = [0, 2, 1, 3]  # print first/second ratings per player together
for row, kind in zip(built.system.rows, built.row_kinds):
    if kind == "augmentation":
        continue
    terms = " + ".join(
        f"{row[0][i]:+.4f}*{labels[i]}" for i in order if i in row[0]
    )
    print(f"  [{kind:>8}] {terms} = {row[1]:+.0f}")
print("(plus 6 sign-symmetric rows per player pair pinning the solution)")
print()

print("=== Betting game on that same match ===")
alpha = PredictionTrace("alpha", (
    PredictionInstance("g", 1, "Alice", "Bob", 0, 0, 0.55, 0),
    PredictionInstance("g", 2, "Alice", "Bob", 100, 120, 0.52, 0),
))
beta = PredictionTrace("beta", (
    PredictionInstance("g", 1, "Alice", "Bob", 0, 0, 0.60, 0),
    PredictionInstance("g", 2, "Alice", "Bob", 100, 120, 0.40, 0),
))
print("round 1 payout (odds 0.55, belief 0.60, Alice loses):",
      betting_payout(0.55, 0.60, 0))
print("round 2 payout (odds 0.52, belief 0.40, Alice loses):",
      betting_payout(0.52, 0.40, 0))
print("beta betting against alpha's odds nets:", round(betting_game(alpha, beta).net, 6))
print("alpha betting against beta's odds nets:", round(betting_game(beta, alpha).net, 6))
print("=> beta is the superior model of this pair")
