"""Throw-level dataset parsing, validation, train/test splitting, and summary stats.

The file format is one CSV row per recorded throw:

    game_id,start_time,round_number,thrower_id,opponent_id,points

Within a game the two players' rows share a game_id and round_number; a round
is complete once each player has three throws. The data never records who
threw first, so a game's internal orientation is arbitrary: player 1 is the
lexicographically smaller identifier, and every model downstream is required
to be orientation-symmetric so the choice cannot matter.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import TextIO

from .core import (
    DEFAULT_RULES,
    GameRecord,
    GameRules,
    RoundScores,
    VALID_SCORES,
)

CSV_HEADER = "game_id,start_time,round_number,thrower_id,opponent_id,points"
MAX_ROUNDS = 200


class IngestError(Exception):
    pass


class MalformedRow(IngestError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InvalidScoreRow(IngestError):
    def __init__(self, line: int, value):
        super().__init__(f"line {line}: {value!r} is not a legal throw score")
        self.line = line
        self.value = value


class IncompleteRound(IngestError):
    def __init__(self, game_id: str, round_number: int):
        super().__init__(f"game {game_id!r}: round {round_number} is incomplete")
        self.game_id = game_id
        self.round_number = round_number


class InconsistentOpponents(IngestError):
    def __init__(self, game_id: str, detail: str = ""):
        super().__init__(f"game {game_id!r}: inconsistent player pair {detail}".rstrip())
        self.game_id = game_id


class NonTerminalGame(IngestError):
    def __init__(self, game_id: str):
        super().__init__(f"game {game_id!r} does not end in a win")
        self.game_id = game_id


class RoundsAfterGameOver(IngestError):
    def __init__(self, game_id: str):
        super().__init__(f"game {game_id!r} has rounds recorded after its finish")
        self.game_id = game_id


def days_since_epoch(dt: datetime) -> float:
    """Fractional days since the Unix epoch; naive datetimes are taken as UTC."""
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.timestamp() / 86400.0


def format_timestamp(dt: datetime) -> str:
    return dt.isoformat(timespec="minutes")


@dataclass(frozen=True)
class Dataset:
    """Validated games plus the closed roster they draw players from."""

    games: tuple[GameRecord, ...]
    roster: frozenset[str]
    cutoff: datetime | None = None
    incomplete: tuple[GameRecord, ...] = ()  # in-progress games kept for stats only

    def all_games(self) -> tuple[GameRecord, ...]:
        return self.games + self.incomplete

    def throws_by_player(self) -> dict[str, list[int]]:
        """Every completed-game throw per player, in game order."""
        out: dict[str, list[int]] = {p: [] for p in sorted(self.roster)}
        for game in self.games:
            for rnd in game.rounds:
                out[game.p1].extend(rnd.p1_throws)
                out[game.p2].extend(rnd.p2_throws)
        return out

    def games_of(self, player: str) -> list[GameRecord]:
        return [g for g in self.games if player in (g.p1, g.p2)]


def _parse_row(line_no: int, row: list[str]) -> tuple[str, datetime, int, str, str, int]:
    if len(row) != 6:
        raise MalformedRow(line_no, f"expected 6 fields, got {len(row)}")
    game_id, start_time, round_number, thrower, opponent, points = (f.strip() for f in row)
    if not game_id or not thrower or not opponent:
        raise MalformedRow(line_no, "empty identifier field")
    try:
        start = datetime.fromisoformat(start_time)
    except ValueError:
        raise MalformedRow(line_no, f"bad start_time {start_time!r}") from None
    try:
        rnd = int(round_number)
    except ValueError:
        raise MalformedRow(line_no, f"bad round_number {round_number!r}") from None
    if not 1 <= rnd <= MAX_ROUNDS:
        raise MalformedRow(line_no, f"round_number {rnd} outside 1..{MAX_ROUNDS}")
    try:
        pts = int(points)
    except ValueError:
        raise InvalidScoreRow(line_no, points) from None
    if pts not in VALID_SCORES:
        raise InvalidScoreRow(line_no, pts)
    return game_id, start, rnd, thrower, opponent, pts


class _GameBuilder:
    def __init__(self, game_id: str, start: datetime):
        self.game_id = game_id
        self.start = start
        self.players: tuple[str, str] | None = None
        # round_number -> thrower -> list of points (file order preserved)
        self.throws: dict[int, dict[str, list[int]]] = {}

    def add(self, line_no: int, start: datetime, rnd: int, thrower: str, opponent: str, pts: int):
        if start != self.start:
            raise MalformedRow(line_no, f"start_time differs within game {self.game_id!r}")
        if thrower == opponent:
            raise InconsistentOpponents(self.game_id, f"(thrower equals opponent, line {line_no})")
        pair = tuple(sorted((thrower, opponent)))
        if self.players is None:
            self.players = pair
        elif pair != self.players:
            raise InconsistentOpponents(self.game_id, f"({pair} vs {self.players})")
        self.throws.setdefault(rnd, {}).setdefault(thrower, []).append(pts)

    def build(self, rules: GameRules) -> tuple[GameRecord, bool]:
        """Returns (record, complete). Raises on structural violations."""
        p1, p2 = self.players
        rounds: list[RoundScores] = []
        last = max(self.throws)
        for rnd in range(1, last + 1):
            per_thrower = self.throws.get(rnd)
            if per_thrower is None:
                raise IncompleteRound(self.game_id, rnd)
            t1 = per_thrower.get(p1, [])
            t2 = per_thrower.get(p2, [])
            if len(t1) != 3 or len(t2) != 3:
                raise IncompleteRound(self.game_id, rnd)
            rounds.append(RoundScores(tuple(t1), tuple(t2)))
        s1 = s2 = 0
        for rnd_scores in rounds:
            if rules.is_terminal(s1, s2):
                raise RoundsAfterGameOver(self.game_id)
            s1 += rnd_scores.p1_total
            s2 += rnd_scores.p2_total
        record = GameRecord(self.game_id, self.start, p1, p2, tuple(rounds))
        return record, rules.is_terminal(s1, s2)


def parse_csv(
    source: str | TextIO,
    rules: GameRules = DEFAULT_RULES,
    allow_incomplete: bool = False,
) -> Dataset:
    """Parse and validate a throw-level CSV file (path or open text stream).

    Incomplete trailing games are rejected unless ``allow_incomplete`` is set,
    in which case they are retained for statistics but never for training.
    """
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return parse_csv(fh, rules=rules, allow_incomplete=allow_incomplete)

    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise MalformedRow(1, "empty file, expected header") from None
    if ",".join(header) != CSV_HEADER:
        raise MalformedRow(1, f"header must be exactly {CSV_HEADER!r}")

    builders: dict[str, _GameBuilder] = {}
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        game_id, start, rnd, thrower, opponent, pts = _parse_row(line_no, row)
        builder = builders.get(game_id)
        if builder is None:
            builder = builders[game_id] = _GameBuilder(game_id, start)
        builder.add(line_no, start, rnd, thrower, opponent, pts)

    games: list[GameRecord] = []
    incomplete: list[GameRecord] = []
    roster: set[str] = set()
    for builder in builders.values():  # insertion order = first appearance in file
        record, complete = builder.build(rules)
        roster.update((record.p1, record.p2))
        if complete:
            games.append(record)
        elif allow_incomplete:
            incomplete.append(record)
        else:
            raise NonTerminalGame(record.game_id)
    return Dataset(tuple(games), frozenset(roster), incomplete=tuple(incomplete))


def serialize_csv(dataset: Dataset, sink: str | TextIO | None = None) -> str | None:
    """Write the dataset back out in the ingest schema.

    Row order is by game (dataset order), then round, then player 1's three
    throws followed by player 2's.
    """
    if sink is None:
        buf = io.StringIO()
        serialize_csv(dataset, buf)
        return buf.getvalue()
    if isinstance(sink, str):
        with open(sink, "w", encoding="utf-8", newline="") as fh:
            serialize_csv(dataset, fh)
        return None

    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(CSV_HEADER.split(","))
    for game in dataset.all_games():
        stamp = format_timestamp(game.start_time)
        for number, rnd in enumerate(game.rounds, start=1):
            for pts in rnd.p1_throws:
                writer.writerow([game.game_id, stamp, number, game.p1, game.p2, pts])
            for pts in rnd.p2_throws:
                writer.writerow([game.game_id, stamp, number, game.p2, game.p1, pts])
    return None


def split(dataset: Dataset, cutoff: datetime) -> tuple[Dataset, Dataset]:
    """Partition games by start_time < cutoff. Both halves keep the full roster."""
    train = tuple(g for g in dataset.games if g.start_time < cutoff)
    test = tuple(g for g in dataset.games if g.start_time >= cutoff)
    return (
        Dataset(train, dataset.roster, cutoff=cutoff),
        Dataset(test, dataset.roster, cutoff=cutoff, incomplete=dataset.incomplete),
    )


@dataclass(frozen=True)
class DatasetStats:
    games_per_week: dict[str, int]
    games_per_player: dict[str, int]
    rounds_per_game: dict[int, int]
    avg_points_per_throw_per_player: dict[str, float]
    mean_rounds_per_game: float
    total_games: int
    total_rounds: int
    total_throws: int

    def to_json_dict(self) -> dict:
        return {
            "games_per_week": dict(self.games_per_week),
            "games_per_player": dict(self.games_per_player),
            "rounds_per_game": {str(k): v for k, v in self.rounds_per_game.items()},
            "avg_points_per_throw_per_player": dict(self.avg_points_per_throw_per_player),
            "mean_rounds_per_game": self.mean_rounds_per_game,
            "totals": {
                "games": self.total_games,
                "rounds": self.total_rounds,
                # Throws are counted as six per round (both players). Exports
                # that count a "round" per thrower would report half of this.
                "throws": self.total_throws,
            },
        }


def summarize(dataset: Dataset) -> DatasetStats:
    """The four headline series: weekly volume, games and scoring per player,
    and the distribution of game lengths. Includes retained incomplete games."""
    games = dataset.all_games()
    games_per_week: dict[str, int] = {}
    games_per_player: dict[str, int] = {p: 0 for p in sorted(dataset.roster)}
    rounds_per_game: dict[int, int] = {}
    points: dict[str, list[int]] = {p: [] for p in sorted(dataset.roster)}

    for game in games:
        year, week, _ = game.start_time.isocalendar()
        label = f"{year}-W{week:02d}"
        games_per_week[label] = games_per_week.get(label, 0) + 1
        games_per_player[game.p1] += 1
        games_per_player[game.p2] += 1
        rounds_per_game[len(game.rounds)] = rounds_per_game.get(len(game.rounds), 0) + 1
        for rnd in game.rounds:
            points[game.p1].extend(rnd.p1_throws)
            points[game.p2].extend(rnd.p2_throws)

    total_rounds = sum(len(g.rounds) for g in games)
    averages = {
        p: (sum(vals) / len(vals) if vals else 0.0) for p, vals in points.items()
    }
    mean_rounds = round(total_rounds / len(games), 2) if games else 0.0
    return DatasetStats(
        games_per_week=dict(sorted(games_per_week.items())),
        games_per_player=games_per_player,
        rounds_per_game=dict(sorted(rounds_per_game.items())),
        avg_points_per_throw_per_player=averages,
        mean_rounds_per_game=mean_rounds,
        total_games=len(games),
        total_rounds=total_rounds,
        total_throws=6 * total_rounds,
    )
