"""Time-adjusted simulation: accuracy categories and multiplier estimates.

Instead of raw empirical scores, each simulated throw combines a baseline
point value drawn from the player's accuracy-category vector with a
multiplier (0x..3x) drawn from their multiplier vector. The category vector
is extrapolated to a reference date with per-category linear regressions,
which lets the model credit players whose aim improved over the season.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

import numpy as np

from ..core import DEFAULT_RULES, GameRules, classify_distance
from ..dataset import Dataset, days_since_epoch
from ..numerics import RandomSource, linear_regression_1d, sample_categorical
from .simulation import DEFAULT_N_SIMS, DEFAULT_ROUND_CAP, sim_predict

# Mean single-region score of each category's sectors: {19,20}, {1,3,5,7},
# {12,16,17,18}, and the ten remaining sectors.
DEFAULT_BASELINES = (19.5, 4.0, 15.75, 9.2)

SINGLE_TARGET_SCORES = frozenset({19, 20})
DOUBLE_TARGET_SCORES = frozenset({38, 40})
TRIPLE_TARGET_SCORES = frozenset({57, 60})


@dataclass(frozen=True)
class DistanceVector:
    """Probability of a throw landing 0, 1, or 2 sectors off target, or missing."""

    d: tuple[float, float, float, float]

    def __post_init__(self):
        if len(self.d) != 4 or any(x < 0 for x in self.d):
            raise ValueError("need 4 nonnegative entries")
        if abs(sum(self.d) - 1.0) > 1e-9:
            raise ValueError("entries must sum to 1")

    @classmethod
    def from_raw(cls, values) -> "DistanceVector":
        """Clamp negatives to zero and normalize to a probability vector."""
        clamped = [max(0.0, float(v)) for v in values]
        total = sum(clamped)
        if total <= 0:
            raise ValueError("no positive mass to normalize")
        return cls(tuple(v / total for v in clamped))


@dataclass(frozen=True)
class MultiplierVector:
    """Probability of a throw scoring with multiplier 0x, 1x, 2x, or 3x."""

    m: tuple[float, float, float, float]

    def __post_init__(self):
        if len(self.m) != 4 or any(x < 0 for x in self.m):
            raise ValueError("need 4 nonnegative entries")
        if abs(sum(self.m) - 1.0) > 1e-9:
            raise ValueError("entries must sum to 1")


def _category_counts(throws) -> np.ndarray:
    counts = np.zeros(4)
    for t in throws:
        counts[classify_distance(t).value] += 1
    return counts


def _category_proportions(throws) -> tuple[float, float, float, float]:
    counts = _category_counts(throws)
    return tuple(counts / counts.sum())


def league_distance_vector(train: Dataset) -> DistanceVector:
    pooled = [t for throws in train.throws_by_player().values() for t in throws]
    if not pooled:
        raise ValueError("training split has no throws")
    return DistanceVector(_category_proportions(pooled))


def fit_distance_vector(
    train: Dataset,
    player: str,
    reference_time: datetime,
    league: DistanceVector | None = None,
) -> DistanceVector:
    """Per-game category proportions regressed against game time, read off at
    the reference date, clamped and renormalized.

    Falls back to the player's pooled proportions when regression is
    impossible (fewer than two games, or identical timestamps), and to the
    league-wide vector when the player has no training games at all.
    """
    games = train.games_of(player)
    if not games:
        return league if league is not None else league_distance_vector(train)

    per_game: list[tuple[float, tuple[float, float, float, float]]] = []
    for game in games:
        throws = []
        for rnd in game.rounds:
            throws.extend(rnd.p1_throws if game.p1 == player else rnd.p2_throws)
        per_game.append((days_since_epoch(game.start_time), _category_proportions(throws)))

    times = [t for t, _ in per_game]
    if len(per_game) < 2 or len(set(times)) < 2:
        pooled = [t for g in games for rnd in g.rounds
                  for t in (rnd.p1_throws if g.p1 == player else rnd.p2_throws)]
        return DistanceVector(_category_proportions(pooled))

    ref = days_since_epoch(reference_time)
    raw = []
    for k in range(4):
        slope, intercept = linear_regression_1d([(t, props[k]) for t, props in per_game])
        raw.append(slope * ref + intercept)
    try:
        return DistanceVector.from_raw(raw)
    except ValueError:
        # Regression extrapolated everything to zero or below; fall back to
        # the player's pooled proportions.
        pooled = [t for g in games for rnd in g.rounds
                  for t in (rnd.p1_throws if g.p1 == player else rnd.p2_throws)]
        return DistanceVector(_category_proportions(pooled))


def league_multiplier_split(train: Dataset) -> tuple[float, float, float]:
    """League-wide single/double/triple shares within the 19/20 sectors."""
    pooled = [t for throws in train.throws_by_player().values() for t in throws]
    n_single = sum(1 for t in pooled if t in SINGLE_TARGET_SCORES)
    n_double = sum(1 for t in pooled if t in DOUBLE_TARGET_SCORES)
    n_triple = sum(1 for t in pooled if t in TRIPLE_TARGET_SCORES)
    total = n_single + n_double + n_triple
    if total == 0:
        return (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)
    return (n_single / total, n_double / total, n_triple / total)


def multiplier_from_throws(
    throws: list[int], fallback_split: tuple[float, float, float]
) -> MultiplierVector:
    """m0 is the zero-score share; the rest splits 1 - m0 by the player's
    single/double/triple frequencies within the 19/20-sector family.
    ``fallback_split`` applies when the player never hit that family."""
    if not throws:
        raise ValueError("no throws")
    m0 = sum(1 for t in throws if t == 0) / len(throws)
    n_single = sum(1 for t in throws if t in SINGLE_TARGET_SCORES)
    n_double = sum(1 for t in throws if t in DOUBLE_TARGET_SCORES)
    n_triple = sum(1 for t in throws if t in TRIPLE_TARGET_SCORES)
    n_target = n_single + n_double + n_triple
    if n_target == 0:
        split = fallback_split
    else:
        split = (n_single / n_target, n_double / n_target, n_triple / n_target)
    return MultiplierVector((m0,) + tuple((1.0 - m0) * s for s in split))


def fit_multiplier_vector(
    train: Dataset,
    player: str,
    league_split: tuple[float, float, float] | None = None,
) -> MultiplierVector:
    throws = train.throws_by_player().get(player, [])
    if league_split is None:
        league_split = league_multiplier_split(train)
    if not throws:
        m0 = _league_zero_share(train)
        return MultiplierVector((m0,) + tuple((1.0 - m0) * s for s in league_split))
    return multiplier_from_throws(throws, league_split)


def _league_zero_share(train: Dataset) -> float:
    pooled = [t for throws in train.throws_by_player().values() for t in throws]
    if not pooled:
        raise ValueError("training split has no throws")
    return sum(1 for t in pooled if t == 0) / len(pooled)


def adjusted_throw(
    source: RandomSource,
    dv: DistanceVector,
    mv: MultiplierVector,
    baselines: tuple[float, float, float, float] = DEFAULT_BASELINES,
) -> float:
    """One simulated throw: baseline value from the distance vector times a
    multiplier index from the multiplier vector. Not a dartboard-legal score;
    these feed cumulative totals only."""
    category = sample_categorical(source, dv.d)
    multiplier = sample_categorical(source, mv.m)
    return baselines[category] * multiplier


class AdjustedThrowSampler:
    """Two uniforms per throw: category first, multiplier second."""

    n_uniforms = 2

    def __init__(self, dv: DistanceVector, mv: MultiplierVector, baselines=DEFAULT_BASELINES):
        self.baseline_values = np.asarray(baselines, dtype=np.float64)
        self.cum_distance = np.cumsum(np.asarray(dv.d, dtype=np.float64))
        self.cum_distance[-1] = 1.0
        self.cum_multiplier = np.cumsum(np.asarray(mv.m, dtype=np.float64))
        self.cum_multiplier[-1] = 1.0

    def scores_from_uniforms(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u)
        category = np.searchsorted(self.cum_distance, u[..., 0], side="right")
        multiplier = np.searchsorted(self.cum_multiplier, u[..., 1], side="right")
        return self.baseline_values[category] * multiplier


@dataclass(frozen=True)
class AdjustedSimModel:
    distance_vectors: dict[str, DistanceVector]
    multiplier_vectors: dict[str, MultiplierVector]
    league_distance: DistanceVector
    league_multiplier: MultiplierVector
    reference_time: datetime
    baselines: tuple[float, float, float, float] = DEFAULT_BASELINES
    n_sims: int = DEFAULT_N_SIMS
    seed: int = 0
    rules: GameRules = DEFAULT_RULES
    round_cap: int = DEFAULT_ROUND_CAP
    name: str = "adjusted_sim"

    def sampler_for(self, player: str) -> AdjustedThrowSampler:
        return AdjustedThrowSampler(
            self.distance_vectors.get(player, self.league_distance),
            self.multiplier_vectors.get(player, self.league_multiplier),
            self.baselines,
        )

    def with_seed(self, seed: int) -> "AdjustedSimModel":
        return AdjustedSimModel(
            self.distance_vectors, self.multiplier_vectors, self.league_distance,
            self.league_multiplier, self.reference_time, self.baselines,
            self.n_sims, seed, self.rules, self.round_cap, self.name,
        )

    def predict(self, p1: str, p2: str, s1: float, s2: float) -> float:
        return sim_predict(self, p1, p2, s1, s2)


def fit_adjusted_sim(
    train: Dataset,
    reference_time: datetime,
    baselines: tuple[float, float, float, float] = DEFAULT_BASELINES,
    n_sims: int = DEFAULT_N_SIMS,
    seed: int = 0,
    rules: GameRules = DEFAULT_RULES,
    round_cap: int = DEFAULT_ROUND_CAP,
) -> AdjustedSimModel:
    if not train.games:
        raise ValueError("training split has no games")
    league_dv = league_distance_vector(train)
    league_split = league_multiplier_split(train)
    league_zero = _league_zero_share(train)
    league_mv = MultiplierVector(
        (league_zero,) + tuple((1.0 - league_zero) * s for s in league_split)
    )
    distance_vectors = {}
    multiplier_vectors = {}
    for player in sorted(train.roster):
        if train.games_of(player):
            distance_vectors[player] = fit_distance_vector(
                train, player, reference_time, league_dv
            )
            multiplier_vectors[player] = fit_multiplier_vector(train, player, league_split)
    return AdjustedSimModel(
        distance_vectors,
        multiplier_vectors,
        league_dv,
        league_mv,
        reference_time,
        baselines,
        n_sims,
        seed,
        rules,
        round_cap,
    )
