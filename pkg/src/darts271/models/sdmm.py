"""Score-dependent Massey ratings.

Every player carries two ratings: one describing strength at 0 points and one
at the winning threshold. Their blend at the current score,

    strength(p, s) = ((T - s) / T) * r_p1 + (s / T) * r_p2,    T = 271,

is the player's perceived strength. Each training round contributes one
least-squares equation saying the strength difference at the round's start
equals +-1 according to the eventual winner; each game adds a closing
equation on the second ratings; and six sign-symmetric rows per player pair
pin the system down to a one-dimensional kernel spanned by the all-ones
vector. The minimum-norm least-squares solution is orthogonal to that kernel,
which realizes the sum-to-zero rating convention with no constraint row.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..core import DEFAULT_RULES, GameRules, winner
from ..dataset import Dataset
from ..numerics import LinearSystem, least_squares_min_norm


@dataclass(frozen=True)
class SdmmRatings:
    r1: dict[str, float]
    r2: dict[str, float]

    @property
    def delta_r(self) -> float:
        """Mean second rating minus mean first rating."""
        if not self.r1:
            return 0.0
        return float(np.mean(list(self.r2.values())) - np.mean(list(self.r1.values())))

    def averages(self) -> tuple[float, float]:
        if not self.r1:
            return 0.0, 0.0
        return float(np.mean(list(self.r1.values()))), float(np.mean(list(self.r2.values())))


@dataclass
class SdmmSystem:
    """The assembled least-squares system plus row provenance for inspection."""

    system: LinearSystem
    players: list[str]
    row_kinds: list[str]  # "round" | "game_end" | "augmentation"

    def rows_of_kind(self, kind: str) -> list[tuple[dict[int, float], float]]:
        return [row for row, k in zip(self.system.rows, self.row_kinds) if k == kind]


def build_sdmm_system(
    train: Dataset,
    augmentation_weight: float = 1.0,
    threshold: int = 271,
    rules: GameRules = DEFAULT_RULES,
) -> SdmmSystem:
    """One row per round, one per game end, and six augmentation rows per pair.

    Unknowns are ordered [r_1^(1) .. r_n^(1), r_1^(2) .. r_n^(2)] over the
    sorted roster. Scores above the threshold (tied endgames) are clamped to
    the threshold before weighting.
    """
    players = sorted(train.roster)
    if not players:
        raise ValueError("empty roster")
    n = len(players)
    first = {p: i for i, p in enumerate(players)}
    second = {p: n + i for i, p in enumerate(players)}
    T = float(threshold)

    system = LinearSystem([], 2 * n)
    kinds: list[str] = []

    def add(coeffs: dict[int, float], rhs: float, kind: str) -> None:
        system.add({k: v for k, v in coeffs.items() if v != 0.0}, rhs)
        kinds.append(kind)

    for game in train.games:
        rhs = 1.0 if winner(game, rules) == game.p1 else -1.0
        i1, i2 = first[game.p1], second[game.p1]
        j1, j2 = first[game.p2], second[game.p2]
        for state in game.states(rules)[:-1]:
            si = min(float(state.s1), T)
            sj = min(float(state.s2), T)
            add(
                {i1: (T - si) / T, i2: si / T, j1: -(T - sj) / T, j2: -sj / T},
                rhs,
                "round",
            )
        add({i2: 1.0, j2: -1.0}, rhs, "game_end")

    w = float(augmentation_weight)
    for a, b in combinations(range(n), 2):
        shapes = [
            {a: w, b: -w},
            {a: w / 2, n + a: w / 2, b: -w / 2, n + b: -w / 2},
            {n + a: w, n + b: -w},
        ]
        for coeffs in shapes:
            add(coeffs, w, "augmentation")
            add(coeffs, -w, "augmentation")

    return SdmmSystem(system, players, kinds)


def fit_sdmm(
    train: Dataset,
    augmentation_weight: float = 1.0,
    threshold: int = 271,
    rules: GameRules = DEFAULT_RULES,
) -> SdmmRatings:
    built = build_sdmm_system(train, augmentation_weight, threshold, rules)
    solution = least_squares_min_norm(built.system)
    n = len(built.players)
    return SdmmRatings(
        r1={p: float(solution[i]) for i, p in enumerate(built.players)},
        r2={p: float(solution[n + i]) for i, p in enumerate(built.players)},
    )


def sdmm_predict(
    ratings: SdmmRatings, p1: str, p2: str, s1: float, s2: float, threshold: int = 271
) -> float:
    """Half of (1 + strength difference), truncated to [0, 1].

    Prediction-time scores are clamped at the threshold for consistency with
    the training rows; unseen players get the roster-average ratings.
    """
    avg1, avg2 = ratings.averages()
    T = float(threshold)

    def strength(player: str, score: float) -> float:
        s = min(float(score), T)
        r1 = ratings.r1.get(player, avg1)
        r2 = ratings.r2.get(player, avg2)
        return ((T - s) / T) * r1 + (s / T) * r2

    raw = 0.5 * (1.0 + strength(p1, s1) - strength(p2, s2))
    return min(1.0, max(0.0, raw))


@dataclass(frozen=True)
class SdmmModel:
    ratings: SdmmRatings
    threshold: int = 271
    name: str = "sdmm"

    def predict(self, p1: str, p2: str, s1: float, s2: float) -> float:
        return sdmm_predict(self.ratings, p1, p2, s1, s2, self.threshold)
