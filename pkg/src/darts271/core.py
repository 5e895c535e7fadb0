"""Dartboard scoring rules and the Darts 271 game-state machine.

Darts 271 is played in rounds of three darts per player; totals update only
after all six darts. A game ends when the two totals differ and the leader
has reached the winning threshold (271 by default). Ties at or above the
threshold keep the game alive.

Everything here is an immutable value with pure operations, so states and
records can be shared freely between ingestion, simulation, and the live
service.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import datetime
from enum import Enum
# Single-dart point values reachable on a standard board:
# miss (0), singles 1-20, doubles, triples, outer/inner bull.
VALID_SCORES: frozenset[int] = frozenset(
    {0, 25, 50}
    | set(range(1, 21))
    | {2 * k for k in range(1, 21)}
    | {3 * k for k in range(1, 21)}
)

WIN_THRESHOLD = 271


class DartsError(Exception):
    """Base class for rule violations."""


class InvalidScore(DartsError):
    def __init__(self, value):
        super().__init__(f"{value!r} is not a dartboard-legal single-throw score")
        self.value = value


class GameAlreadyOver(DartsError):
    def __init__(self, state: "GameState"):
        super().__init__(
            f"game is over at {state.s1}-{state.s2}; no more rounds accepted"
        )
        self.state = state


class IncompleteGame(DartsError):
    def __init__(self, game_id):
        super().__init__(f"game {game_id!r} never reaches a terminal state")
        self.game_id = game_id


def validate_score(value: int) -> int:
    """Return ``value`` if it is a legal single-throw score, else raise InvalidScore."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidScore(value)
    if value not in VALID_SCORES:
        raise InvalidScore(value)
    return value


class DistanceCategory(Enum):
    """How close a throw landed to the 19/20 target sectors."""

    DISTANCE_0 = 0
    DISTANCE_1 = 1
    DISTANCE_2 = 2
    MISS = 3


# Score values per accuracy category. Every recorded score is attributed to
# the single region that produces it, so e.g. 18 (= double 9 = triple 6)
# counts as the 18-sector and lands in DISTANCE_2.
DISTANCE_0_SCORES = frozenset({19, 20, 38, 40, 57, 60})
DISTANCE_1_SCORES = frozenset({1, 3, 5, 7, 21})
DISTANCE_2_SCORES = frozenset({12, 16, 17, 18, 24, 32, 34, 36, 48, 51, 54})


def classify_distance(score: int) -> DistanceCategory:
    """Classify a valid throw score into its accuracy category."""
    validate_score(score)
    if score in DISTANCE_0_SCORES:
        return DistanceCategory.DISTANCE_0
    if score in DISTANCE_1_SCORES:
        return DistanceCategory.DISTANCE_1
    if score in DISTANCE_2_SCORES:
        return DistanceCategory.DISTANCE_2
    return DistanceCategory.MISS


@dataclass(frozen=True)
class GameRules:
    """Win-condition parameters.

    ``inclusive=True`` ends the game once the leader's total is >= threshold;
    ``inclusive=False`` requires strictly more than the threshold.
    """

    threshold: int = WIN_THRESHOLD
    inclusive: bool = True

    def is_terminal(self, s1: float, s2: float) -> bool:
        if s1 == s2:
            return False
        lead = max(s1, s2)
        return lead >= self.threshold if self.inclusive else lead > self.threshold


DEFAULT_RULES = GameRules()


@dataclass(frozen=True)
class RoundScores:
    """One round: three throws per player, in recorded (but meaningless) order."""

    p1_throws: tuple[int, int, int]
    p2_throws: tuple[int, int, int]

    def __post_init__(self):
        for side in (self.p1_throws, self.p2_throws):
            if len(side) != 3:
                raise DartsError(f"a round needs exactly 3 throws per player, got {side!r}")
            for v in side:
                validate_score(v)

    @property
    def p1_total(self) -> int:
        return sum(self.p1_throws)

    @property
    def p2_total(self) -> int:
        return sum(self.p2_throws)


@dataclass(frozen=True)
class GameState:
    """A live position between rounds.

    States reached through ``apply_round`` from (0, 0) carry totals that are
    sums of validated throws; the constructor itself does not re-derive
    reachability (deciding it would be a subset-sum search).
    """

    p1: str
    p2: str
    s1: int = 0
    s2: int = 0
    rounds_played: int = 0
    rules: GameRules = DEFAULT_RULES

    @property
    def terminal(self) -> bool:
        return self.rules.is_terminal(self.s1, self.s2)

    @property
    def leader(self) -> str | None:
        if self.s1 == self.s2:
            return None
        return self.p1 if self.s1 > self.s2 else self.p2


def apply_round(state: GameState, rnd: RoundScores) -> GameState:
    """Add one round's throws to both totals. Raises GameAlreadyOver on terminal states."""
    if state.terminal:
        raise GameAlreadyOver(state)
    return replace(
        state,
        s1=state.s1 + rnd.p1_total,
        s2=state.s2 + rnd.p2_total,
        rounds_played=state.rounds_played + 1,
    )


@dataclass(frozen=True)
class GameRecord:
    """A completed game: identity, start time (minute precision), and its rounds."""

    game_id: str
    start_time: datetime
    p1: str
    p2: str
    rounds: tuple[RoundScores, ...]

    def __post_init__(self):
        if self.p1 == self.p2:
            raise DartsError(f"game {self.game_id!r} has identical players")

    def states(self, rules: GameRules = DEFAULT_RULES) -> list[GameState]:
        """All states from (0,0) through the final round, inclusive."""
        state = GameState(self.p1, self.p2, rules=rules)
        out = [state]
        for rnd in self.rounds:
            state = apply_round(state, rnd)
            out.append(state)
        return out

    def final_state(self, rules: GameRules = DEFAULT_RULES) -> GameState:
        return self.states(rules)[-1]


def replay(record: GameRecord, rules: GameRules = DEFAULT_RULES) -> GameState:
    """Replay all rounds; raises GameAlreadyOver if rounds continue past the end."""
    return record.final_state(rules)


def winner(record: GameRecord, rules: GameRules = DEFAULT_RULES) -> str:
    """The player with the strictly greater final score; IncompleteGame if unresolved."""
    final = replay(record, rules)
    if not final.terminal:
        raise IncompleteGame(record.game_id)
    return final.leader
