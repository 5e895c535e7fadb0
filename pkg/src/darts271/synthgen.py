"""Synthetic seasons with planted skills and a simulation ground-truth oracle.

Each player gets a skill profile: a target (the 20-sector, the 19-sector, or
the bullseye), an accuracy in [0, 1] that may drift linearly over the season,
and a probability of missing the board outright. A profile expands into a
single-throw score distribution over the legal board values, games are played
out with the core rules, and the emitted CSV round-trips through the ingest
parser by construction.

The accuracy mixture is this module's own two-parameter design (accuracy and
board-miss rate; shape constants below). Nothing downstream assumes it is
realistic: tests compare fitted models against this generator's own planted
truth, never against real play.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace
from datetime import datetime, timedelta
from itertools import combinations

from .core import DEFAULT_RULES, GameRecord, GameRules, RoundScores
from .dataset import Dataset, MAX_ROUNDS, serialize_csv
from .models.simulation import EmpiricalThrowDistribution, win_probability_batch
from .numerics import RandomSource, substream_keys

# Standard dartboard sector order, clockwise from the top.
SECTOR_RING = (20, 1, 18, 4, 13, 6, 10, 15, 2, 17, 3, 19, 7, 16, 8, 11, 14, 9, 12, 5)

TARGETS = ("sector20", "sector19", "bullseye")

# How the (1 - accuracy) mass spreads away from the target sector, and how a
# struck sector splits across its rings. Triple share grows with accuracy.
NEIGHBOR_SHARE = 0.50   # one sector off, split between the two sides
TWO_OFF_SHARE = 0.30    # two sectors off
FAR_SHARE = 0.20        # anywhere else on the board, uniform over 15 sectors
DOUBLE_RING_SHARE = 0.10


def _triple_share(accuracy: float) -> float:
    return 0.08 + 0.22 * accuracy


class PlanError(Exception):
    pass


class GenerationError(Exception):
    pass


@dataclass(frozen=True)
class SkillProfile:
    player: str
    target: str = "sector20"
    accuracy: float = 0.4
    drift_per_day: float = 0.0
    board_miss_rate: float = 0.1
    anchor: datetime | None = None  # time at which `accuracy` applies; set by the plan

    def __post_init__(self):
        if self.target not in TARGETS:
            raise PlanError(f"unknown target {self.target!r}")
        if not 0.0 <= self.accuracy <= 1.0:
            raise PlanError("accuracy must be in [0, 1]")
        if not 0.0 <= self.board_miss_rate <= 1.0:
            raise PlanError("board_miss_rate must be in [0, 1]")

    def accuracy_at(self, at: datetime) -> float:
        if self.drift_per_day == 0.0:
            return self.accuracy
        if self.anchor is None:
            raise PlanError(f"profile {self.player!r} drifts but has no anchor time")
        days = (at - self.anchor).total_seconds() / 86400.0
        return min(1.0, max(0.0, self.accuracy + self.drift_per_day * days))

    def to_json_dict(self) -> dict:
        return {
            "player": self.player,
            "target": self.target,
            "accuracy": self.accuracy,
            "drift_per_day": self.drift_per_day,
            "board_miss_rate": self.board_miss_rate,
            "anchor": self.anchor.isoformat(timespec="minutes") if self.anchor else None,
        }


def _ring_split(sector: int, mass: float, accuracy: float, into: dict[int, float]) -> None:
    triple = _triple_share(accuracy)
    single = 1.0 - DOUBLE_RING_SHARE - triple
    into[sector] = into.get(sector, 0.0) + mass * single
    into[2 * sector] = into.get(2 * sector, 0.0) + mass * DOUBLE_RING_SHARE
    into[3 * sector] = into.get(3 * sector, 0.0) + mass * triple


def profile_to_distribution(profile: SkillProfile, at: datetime) -> EmpiricalThrowDistribution:
    """Expand a profile into a single-throw score distribution at a moment in time.

    Higher accuracy strictly increases the chance of landing in the target
    sector (and, for sector targets, of the 19/20-family scores).
    """
    a = profile.accuracy_at(at)
    on_board = 1.0 - profile.board_miss_rate
    scores: dict[int, float] = {0: profile.board_miss_rate}

    if profile.target == "bullseye":
        inner = 0.25 + 0.25 * a
        scores[50] = scores.get(50, 0.0) + on_board * a * inner
        scores[25] = scores.get(25, 0.0) + on_board * a * (1.0 - inner)
        scatter = on_board * (1.0 - a) / len(SECTOR_RING)
        for sector in SECTOR_RING:
            _ring_split(sector, scatter, a, scores)
    else:
        target = 20 if profile.target == "sector20" else 19
        pos = SECTOR_RING.index(target)
        _ring_split(target, on_board * a, a, scores)
        spread = on_board * (1.0 - a)
        near = {}
        for offset, share in ((1, NEIGHBOR_SHARE / 2), (2, TWO_OFF_SHARE / 2)):
            for side in (-1, 1):
                sector = SECTOR_RING[(pos + side * offset) % len(SECTOR_RING)]
                near[sector] = share
        for sector, share in near.items():
            _ring_split(sector, spread * share, a, scores)
        far_sectors = [
            s for s in SECTOR_RING if s != target and s not in near
        ]
        for sector in far_sectors:
            _ring_split(sector, spread * FAR_SHARE / len(far_sectors), a, scores)

    support = tuple(sorted(s for s in scores if scores[s] > 0.0))
    total = sum(scores[s] for s in support)
    return EmpiricalThrowDistribution(support, tuple(scores[s] / total for s in support))


@dataclass(frozen=True)
class SeasonPlan:
    players: tuple[SkillProfile, ...]
    n_games: int
    start: datetime
    end: datetime
    seed: int

    def __post_init__(self):
        if len(self.players) < 2:
            raise PlanError("need at least 2 players")
        if self.n_games < 1:
            raise PlanError("need at least 1 game")
        if self.n_games < (len(self.players) + 1) // 2:
            raise PlanError("too few games for every player to appear")
        if self.end <= self.start:
            raise PlanError("season must end after it starts")
        names = [p.player for p in self.players]
        if len(set(names)) != len(names):
            raise PlanError("duplicate player identifiers")

    def anchored_players(self) -> tuple[SkillProfile, ...]:
        return tuple(
            p if p.anchor is not None else replace(p, anchor=self.start)
            for p in self.players
        )


def _shuffled(source: RandomSource, items: list) -> list:
    out = list(items)
    for i in range(len(out) - 1, 0, -1):
        j = int(source.next_float() * (i + 1))
        out[i], out[j] = out[j], out[i]
    return out


def _schedule(plan: SeasonPlan, source: RandomSource) -> list[tuple[str, str]]:
    """A random near-matching first (so everyone appears early), then shuffled
    round-robin blocks with repetition."""
    names = [p.player for p in plan.players]
    order = _shuffled(source.substream(1), names)
    pairs: list[tuple[str, str]] = []
    for i in range(0, len(order) - 1, 2):
        pairs.append((order[i], order[i + 1]))
    if len(order) % 2 == 1:
        partner = order[int(source.next_float() * (len(order) - 1))]
        pairs.append((order[-1], partner))

    block = 2
    all_pairs = list(combinations(sorted(names), 2))
    while len(pairs) < plan.n_games:
        pairs.extend(_shuffled(source.substream(block), all_pairs))
        block += 1
    return pairs[: plan.n_games]


def _play_game(
    game_id: str,
    start_time: datetime,
    a: str,
    b: str,
    sampler_a,
    sampler_b,
    source: RandomSource,
    rules: GameRules,
) -> GameRecord:
    p1, p2 = (a, b) if a < b else (b, a)
    s1_draw = sampler_a if p1 == a else sampler_b
    s2_draw = sampler_b if p1 == a else sampler_a
    s1 = s2 = 0
    rounds: list[RoundScores] = []
    for _ in range(MAX_ROUNDS):
        t1 = tuple(
            int(s1_draw.scores_from_uniforms(source.next_floats(1))) for _ in range(3)
        )
        t2 = tuple(
            int(s2_draw.scores_from_uniforms(source.next_floats(1))) for _ in range(3)
        )
        rounds.append(RoundScores(t1, t2))
        s1 += sum(t1)
        s2 += sum(t2)
        if rules.is_terminal(s1, s2):
            return GameRecord(game_id, start_time, p1, p2, tuple(rounds))
    raise GenerationError(
        f"game {game_id} still unresolved after {MAX_ROUNDS} rounds; "
        "the plan's profiles barely score"
    )


def generate_season(
    plan: SeasonPlan,
    rules: GameRules = DEFAULT_RULES,
    truth_replicas: int = 100_000,
    truth_time: datetime | None = None,
    include_ground_truth: bool = True,
) -> tuple[Dataset, dict | None]:
    """Simulate a full season; deterministic given the plan (byte-exact CSV).

    Ground truth holds the planted profiles and, for every unordered player
    pair, the start-of-game win probability of the lexicographically smaller
    player estimated from ``truth_replicas`` oracle simulations at
    ``truth_time`` (season end by default).
    """
    profiles = {p.player: p for p in plan.anchored_players()}
    source = RandomSource(plan.seed)
    pairs = _schedule(plan, source.substream(0))

    width = max(4, len(str(plan.n_games)))
    span = (plan.end - plan.start).total_seconds()
    records = []
    roster: set[str] = set()
    for g, (a, b) in enumerate(pairs):
        at = plan.start + timedelta(seconds=span * (g + 1) / (plan.n_games + 1))
        at = at.replace(second=0, microsecond=0)
        sampler_a = profile_to_distribution(profiles[a], at).sampler()
        sampler_b = profile_to_distribution(profiles[b], at).sampler()
        game_id = f"g{g + 1:0{width}d}"
        records.append(
            _play_game(game_id, at, a, b, sampler_a, sampler_b, source.substream(100 + g), rules)
        )
        roster.update((a, b))

    dataset = Dataset(tuple(records), frozenset(roster))
    if not include_ground_truth:
        return dataset, None

    when = truth_time or plan.end
    truth: dict[str, dict[str, float]] = {}
    names = sorted(roster)
    for idx, (a, b) in enumerate(combinations(names, 2)):
        keys = substream_keys(source.substream(10_000_000 + idx).key, truth_replicas)
        outcomes = win_probability_batch(
            profile_to_distribution(profiles[a], when).sampler(),
            profile_to_distribution(profiles[b], when).sampler(),
            0.0,
            0.0,
            keys,
            rules,
        )
        truth.setdefault(a, {})[b] = float(outcomes.mean())
    ground_truth = {
        "truth_time": when.isoformat(timespec="minutes"),
        "replicas": truth_replicas,
        "profiles": [profiles[p].to_json_dict() for p in names],
        "pairwise_p1_win_probability": truth,
    }
    return dataset, ground_truth


def default_profiles(n_players: int, seed: int = 0) -> tuple[SkillProfile, ...]:
    """A heterogeneous field: accuracies spread over [0.15, 0.75], mostly
    sector aimers with a couple of bullseye throwers, some drifting."""
    source = RandomSource(seed, stream=9)
    profiles = []
    for i in range(n_players):
        frac = i / max(1, n_players - 1)
        accuracy = 0.15 + 0.60 * frac
        target = TARGETS[i % 3] if i % 7 == 3 else ("sector20" if i % 2 == 0 else "sector19")
        drift = 0.0
        if i % 3 == 0:
            drift = (source.next_float() - 0.3) * 0.002
        miss = 0.25 - 0.18 * frac
        profiles.append(
            SkillProfile(
                player=f"player{i + 1:02d}",
                target=target,
                accuracy=round(accuracy, 4),
                drift_per_day=round(drift, 6),
                board_miss_rate=round(miss, 4),
            )
        )
    return tuple(profiles)


def write_season(plan: SeasonPlan, out_dir: str, rules: GameRules = DEFAULT_RULES,
                 truth_replicas: int = 100_000) -> tuple[str, str]:
    """Emit season.csv and ground_truth.json under ``out_dir``."""
    dataset, truth = generate_season(plan, rules, truth_replicas=truth_replicas)
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "season.csv")
    truth_path = os.path.join(out_dir, "ground_truth.json")
    serialize_csv(dataset, csv_path)
    with open(truth_path, "w", encoding="utf-8") as fh:
        json.dump(truth, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return csv_path, truth_path
