"""Logistic regression on player identities and the current totals."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from ..core import DEFAULT_RULES, GameRules, winner
from ..dataset import Dataset
from .. import numerics

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LogisticModel:
    """P(p1 wins) = sigmoid(c0 + c_{p1} - c_{p2} + c1*s1 + c2*s2).

    Players absent from training carry coefficient 0.
    """

    c0: float
    c1: float
    c2: float
    player_coefficients: dict[str, float]
    name: str = "logistic"

    def predict(self, p1: str, p2: str, s1: float, s2: float) -> float:
        z = (
            self.c0
            + self.player_coefficients.get(p1, 0.0)
            - self.player_coefficients.get(p2, 0.0)
            + self.c1 * s1
            + self.c2 * s2
        )
        if z >= 0:
            return 1.0 / (1.0 + math.exp(-z))
        ez = math.exp(z)
        return ez / (1.0 + ez)


def fit_logistic_model(
    train: Dataset,
    l2: float = 1e-3,
    rules: GameRules = DEFAULT_RULES,
) -> LogisticModel:
    """One observation per round start, plus its player/score mirror.

    The mirror (swap players and scores, complement the label) makes the
    penalized likelihood symmetric under orientation, which forces the unique
    optimum to satisfy c0 = 0 and c2 = -c1 and hence makes the fitted model
    exactly orientation-symmetric.
    """
    if not train.games:
        raise ValueError("training split has no games")
    players = sorted(train.roster)
    index = {p: 1 + i for i, p in enumerate(players)}
    s1_idx = 1 + len(players)
    s2_idx = 2 + len(players)

    observations: list[tuple[dict[int, float], int]] = []
    for game in train.games:
        y = 1 if winner(game, rules) == game.p1 else 0
        i, j = index[game.p1], index[game.p2]
        for state in game.states(rules)[:-1]:
            s1, s2 = float(state.s1), float(state.s2)
            observations.append(({0: 1.0, i: 1.0, j: -1.0, s1_idx: s1, s2_idx: s2}, y))
            observations.append(({0: 1.0, j: 1.0, i: -1.0, s1_idx: s2, s2_idx: s1}, 1 - y))

    w = numerics.fit_logistic(observations, l2=l2, n_features=s2_idx + 1)
    model = LogisticModel(
        c0=float(w[0]),
        c1=float(w[s1_idx]),
        c2=float(w[s2_idx]),
        player_coefficients={p: float(w[index[p]]) for p in players},
    )
    if model.c1 <= 0:
        # predictions would *fall* as the player's own score rises
        logger.warning(
            "fitted own-score coefficient c1 = %.6g is not positive; "
            "predictions are not monotone in the player's score", model.c1,
        )
    return model
