"""Monte Carlo win probability from per-player empirical throw distributions.

``sim_predict`` plays the remainder of the game to completion many times and
returns the winning fraction. Replicas are keyed by replica index through a
counter-based random source, so the whole batch can be evaluated with numpy
in one pass (``win_probability_batch``) while staying draw-for-draw identical
to the sequential reference loop (``simulate_remaining``).

Both prediction directions of a state are answered by the same replicas: the
state is put into a canonical player order before simulating, which makes
``predict(p1,p2,s1,s2) + predict(p2,p1,s2,s1) = 1`` hold exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..core import DEFAULT_RULES, GameRules, VALID_SCORES
from ..dataset import Dataset
from ..numerics import RandomSource, substream_keys, uniforms_grid

DEFAULT_N_SIMS = 1000
DEFAULT_ROUND_CAP = 500


class SimOutcome(Enum):
    P1_WINS = 1
    P2_WINS = 2
    UNRESOLVED = 0


@dataclass(frozen=True)
class EmpiricalThrowDistribution:
    """Relative frequency of each single-throw score for one player."""

    support: tuple[int, ...]
    probabilities: tuple[float, ...]

    def __post_init__(self):
        if len(self.support) != len(self.probabilities) or not self.support:
            raise ValueError("support and probabilities must be non-empty and aligned")
        if any(s not in VALID_SCORES for s in self.support):
            raise ValueError("support contains scores not reachable on a dartboard")
        if any(p < 0 for p in self.probabilities):
            raise ValueError("negative probability")
        if abs(sum(self.probabilities) - 1.0) > 1e-9:
            raise ValueError("probabilities must sum to 1")

    @classmethod
    def from_throws(cls, throws: list[int]) -> "EmpiricalThrowDistribution":
        if not throws:
            raise ValueError("no throws to build a distribution from")
        counts: dict[int, int] = {}
        for t in throws:
            counts[t] = counts.get(t, 0) + 1
        support = tuple(sorted(counts))
        total = len(throws)
        return cls(support, tuple(counts[s] / total for s in support))

    def probability_of(self, score: int) -> float:
        try:
            return self.probabilities[self.support.index(score)]
        except ValueError:
            return 0.0

    def mean(self) -> float:
        return float(sum(s * p for s, p in zip(self.support, self.probabilities)))

    def sampler(self) -> "CategoricalThrowSampler":
        return CategoricalThrowSampler(
            np.asarray(self.support, dtype=np.float64),
            np.asarray(self.probabilities, dtype=np.float64),
        )


class CategoricalThrowSampler:
    """Inverse-CDF sampler; consumes exactly one uniform per throw."""

    n_uniforms = 1

    def __init__(self, values: np.ndarray, probabilities: np.ndarray):
        self.values = values
        self.cumulative = np.cumsum(probabilities)
        self.cumulative[-1] = 1.0

    def scores_from_uniforms(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u)
        idx = np.searchsorted(self.cumulative, u[..., 0], side="right")
        return self.values[idx]


def empirical_distribution(train: Dataset, player: str) -> EmpiricalThrowDistribution:
    """The player's training-throw frequencies; unseen players get the league pool."""
    throws = train.throws_by_player().get(player, [])
    if throws:
        return EmpiricalThrowDistribution.from_throws(throws)
    return league_distribution(train)


def league_distribution(train: Dataset) -> EmpiricalThrowDistribution:
    pooled = [t for throws in train.throws_by_player().values() for t in throws]
    if not pooled:
        raise ValueError("training split has no throws")
    return EmpiricalThrowDistribution.from_throws(pooled)


def simulate_remaining(
    p1_draw,
    p2_draw,
    s1: float,
    s2: float,
    source: RandomSource,
    rules: GameRules = DEFAULT_RULES,
    round_cap: int = DEFAULT_ROUND_CAP,
) -> SimOutcome:
    """Sequential reference: play full rounds until one player leads past the
    threshold, or give up after ``round_cap`` further rounds (UNRESOLVED).

    Draw order within a round is player 1's three throws then player 2's;
    each throw consumes the sampler's ``n_uniforms`` uniforms. The vectorized
    engine reproduces this consumption order exactly.
    """
    s1, s2 = float(s1), float(s2)
    for _ in range(round_cap):
        for _ in range(3):
            s1 += float(p1_draw.scores_from_uniforms(source.next_floats(p1_draw.n_uniforms)))
        for _ in range(3):
            s2 += float(p2_draw.scores_from_uniforms(source.next_floats(p2_draw.n_uniforms)))
        if rules.is_terminal(s1, s2):
            return SimOutcome.P1_WINS if s1 > s2 else SimOutcome.P2_WINS
    return SimOutcome.UNRESOLVED


def win_probability_batch(
    p1_draw,
    p2_draw,
    s1: float,
    s2: float,
    keys: np.ndarray,
    rules: GameRules = DEFAULT_RULES,
    round_cap: int = DEFAULT_ROUND_CAP,
) -> np.ndarray:
    """Replica outcomes for player 1 (1.0 win / 0.0 loss / 0.5 unresolved).

    ``keys`` holds one counter-based stream key per replica; replica i's j-th
    uniform is a pure function of (keys[i], j), so results are independent of
    batching and evaluation order.
    """
    n = len(keys)
    nu1, nu2 = p1_draw.n_uniforms, p2_draw.n_uniforms
    stride = 3 * (nu1 + nu2)

    result = np.full(n, 0.5)
    active_keys = np.asarray(keys, dtype=np.uint64)
    active_idx = np.arange(n)
    t1 = np.full(n, float(s1))
    t2 = np.full(n, float(s2))

    for rnd in range(round_cap):
        counters = np.arange(rnd * stride, (rnd + 1) * stride, dtype=np.uint64)
        u = uniforms_grid(active_keys, counters)
        u1 = u[:, : 3 * nu1].reshape(-1, 3, nu1)
        u2 = u[:, 3 * nu1 :].reshape(-1, 3, nu2)
        t1 += p1_draw.scores_from_uniforms(u1).sum(axis=1)
        t2 += p2_draw.scores_from_uniforms(u2).sum(axis=1)

        lead = np.maximum(t1, t2)
        past = lead >= rules.threshold if rules.inclusive else lead > rules.threshold
        done = past & (t1 != t2)
        if done.any():
            result[active_idx[done]] = (t1[done] > t2[done]).astype(np.float64)
            keep = ~done
            if not keep.any():
                return result
            active_keys = active_keys[keep]
            active_idx = active_idx[keep]
            t1 = t1[keep]
            t2 = t2[keep]
    return result


@dataclass(frozen=True)
class BasicSimModel:
    """Monte Carlo model driven by each player's empirical point distribution."""

    distributions: dict[str, EmpiricalThrowDistribution]
    league: EmpiricalThrowDistribution
    n_sims: int = DEFAULT_N_SIMS
    seed: int = 0
    rules: GameRules = DEFAULT_RULES
    round_cap: int = DEFAULT_ROUND_CAP
    name: str = "basic_sim"

    def sampler_for(self, player: str) -> CategoricalThrowSampler:
        return self.distributions.get(player, self.league).sampler()

    def with_seed(self, seed: int) -> "BasicSimModel":
        return BasicSimModel(
            self.distributions, self.league, self.n_sims, seed, self.rules,
            self.round_cap, self.name,
        )

    def predict(self, p1: str, p2: str, s1: float, s2: float) -> float:
        return sim_predict(self, p1, p2, s1, s2)


def fit_basic_sim(
    train: Dataset,
    n_sims: int = DEFAULT_N_SIMS,
    seed: int = 0,
    rules: GameRules = DEFAULT_RULES,
    round_cap: int = DEFAULT_ROUND_CAP,
) -> BasicSimModel:
    if not train.games:
        raise ValueError("training split has no games")
    league = league_distribution(train)
    distributions = {
        p: EmpiricalThrowDistribution.from_throws(throws)
        for p, throws in train.throws_by_player().items()
        if throws
    }
    return BasicSimModel(distributions, league, n_sims, seed, rules, round_cap)


def sim_predict(model, p1: str, p2: str, s1: float, s2: float) -> float:
    """Fraction of replicas won by p1; unresolved replicas count half.

    The state is canonicalized (smaller player id first, score as tiebreak)
    before simulating, so both orientations of the same state share replicas
    and sum to 1.
    """
    if model.rules.is_terminal(s1, s2):
        return 1.0 if s1 > s2 else 0.0
    swap = p2 < p1 or (p1 == p2 and s2 < s1)
    a, b, sa, sb = (p2, p1, s2, s1) if swap else (p1, p2, s1, s2)
    keys = substream_keys(RandomSource(model.seed).key, model.n_sims)
    outcomes = win_probability_batch(
        model.sampler_for(a),
        model.sampler_for(b),
        sa,
        sb,
        keys,
        model.rules,
        model.round_cap,
    )
    p_first = float(outcomes.mean())
    return 1.0 - p_first if swap else p_first
