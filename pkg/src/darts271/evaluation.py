"""Brier scores, the pairwise betting game, and report assembly.

Predictions are collected per (game, round) instance at the start of each
round of each test game. Comparisons always align on identical instance
sets; evaluating models that were scored on different games is refused
rather than silently intersected.

In the betting game one model sets the odds and the other bets directionally
on every instance where they disagree. Per instance the bettor's payout and
the odds-setter's book are exact negatives, so the game is zero-sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from .core import DEFAULT_RULES, GameRules, winner
from .dataset import Dataset


class EvaluationError(Exception):
    pass


class EmptyFilter(EvaluationError):
    pass


class MisalignedTraces(EvaluationError):
    pass


@dataclass(frozen=True)
class PredictionInstance:
    game_id: str
    round_number: int  # 1-based; the prediction is made at this round's start
    p1: str
    p2: str
    s1: float
    s2: float
    prediction: float
    outcome: int  # 1 if p1 won the game


@dataclass(frozen=True)
class PredictionTrace:
    model_name: str
    instances: tuple[PredictionInstance, ...]

    def keys(self) -> frozenset[tuple[str, int]]:
        return frozenset((i.game_id, i.round_number) for i in self.instances)

    def filtered(self, round_number: int | None) -> tuple[PredictionInstance, ...]:
        if round_number is None:
            return self.instances
        return tuple(i for i in self.instances if i.round_number == round_number)


def build_trace(
    model, test: Dataset, rules: GameRules = DEFAULT_RULES
) -> PredictionTrace:
    """Predictions at every round start of every complete test game."""
    instances = []
    for game in test.games:
        outcome = 1 if winner(game, rules) == game.p1 else 0
        for round_number, state in enumerate(game.states(rules)[:-1], start=1):
            instances.append(
                PredictionInstance(
                    game_id=game.game_id,
                    round_number=round_number,
                    p1=game.p1,
                    p2=game.p2,
                    s1=state.s1,
                    s2=state.s2,
                    prediction=model.predict(game.p1, game.p2, state.s1, state.s2),
                    outcome=outcome,
                )
            )
    return PredictionTrace(model.name, tuple(instances))


def build_traces(
    models: dict[str, object], test: Dataset, rules: GameRules = DEFAULT_RULES
) -> dict[str, PredictionTrace]:
    return {name: build_trace(model, test, rules) for name, model in models.items()}


def brier(trace: PredictionTrace, round_number: int | None = None) -> float:
    """Mean squared difference between predictions and outcomes."""
    instances = trace.filtered(round_number)
    if not instances:
        raise EmptyFilter(
            f"{trace.model_name}: no instances"
            + (f" at round {round_number}" if round_number else "")
        )
    return sum((i.prediction - i.outcome) ** 2 for i in instances) / len(instances)


def _check_alignment(traces: dict[str, PredictionTrace]) -> None:
    names = sorted(traces)
    reference = traces[names[0]].keys()
    for name in names[1:]:
        if traces[name].keys() != reference:
            raise MisalignedTraces(
                f"{names[0]} and {name} cover different (game, round) instances"
            )


@dataclass(frozen=True)
class BrierRow:
    label: str
    n: int
    scores: dict[str, float]
    best: str  # model with the row's minimum


@dataclass(frozen=True)
class BrierTable:
    models: tuple[str, ...]
    rows: tuple[BrierRow, ...]

    def to_json_dict(self) -> dict:
        return {
            "models": list(self.models),
            "rows": [
                {
                    "label": row.label,
                    "n": row.n,
                    "scores": {m: row.scores[m] for m in self.models},
                    "best": row.best,
                }
                for row in self.rows
            ],
        }


def brier_table(traces: dict[str, PredictionTrace]) -> BrierTable:
    """Per-round Brier scores for each model plus an all-rounds row."""
    if not traces:
        raise EmptyFilter("no traces")
    _check_alignment(traces)
    names = tuple(sorted(traces))
    any_trace = traces[names[0]]
    if not any_trace.instances:
        raise EmptyFilter("traces are empty")
    max_round = max(i.round_number for i in any_trace.instances)

    rows = []
    for rnd in range(1, max_round + 1):
        n = len(any_trace.filtered(rnd))
        if n == 0:
            continue
        scores = {name: brier(traces[name], rnd) for name in names}
        rows.append(BrierRow(f"Round {rnd}", n, scores, min(scores, key=lambda m: (scores[m], m))))
    all_scores = {name: brier(traces[name]) for name in names}
    rows.append(
        BrierRow(
            "All rounds",
            len(any_trace.instances),
            all_scores,
            min(all_scores, key=lambda m: (all_scores[m], m)),
        )
    )
    return BrierTable(names, tuple(rows))


def betting_payout(alpha: float, beta: float, outcome: int) -> float:
    """Bettor's payout when the odds-setter quotes alpha and the bettor believes beta.

    The bettor backs the event when beta > alpha and lays it when beta < alpha;
    equal quotes mean no bet. Stakes scale with |alpha - beta|.
    """
    if alpha == beta:
        return 0.0
    edge = abs(alpha - beta)
    bets_on_event = beta > alpha
    if outcome == 1:
        return edge * (1.0 - alpha) if bets_on_event else -edge * (1.0 - alpha)
    return -edge * alpha if bets_on_event else edge * alpha


@dataclass(frozen=True)
class BettingLedger:
    odds_model: str
    betting_model: str
    payouts: tuple[tuple[tuple[str, int], float], ...]  # ((game_id, round), bettor payout)
    net: float

    @property
    def odds_setter_net(self) -> float:
        return -self.net


def betting_game(
    odds: PredictionTrace,
    bets: PredictionTrace,
    round_number: int | None = None,
) -> BettingLedger:
    """Run the betting game over aligned instances; the ledger keeps per-instance detail.

    ``round_number=1`` restricts bets to the start of each game.
    """
    if odds.keys() != bets.keys():
        raise MisalignedTraces(
            f"{odds.model_name} and {bets.model_name} cover different instances"
        )
    odds_by_key = {(i.game_id, i.round_number): i for i in odds.instances}
    entries = []
    total = 0.0
    for bet in sorted(bets.filtered(round_number), key=lambda i: (i.game_id, i.round_number)):
        quote = odds_by_key[(bet.game_id, bet.round_number)]
        if quote.prediction == bet.prediction:
            continue
        payout = betting_payout(quote.prediction, bet.prediction, bet.outcome)
        entries.append(((bet.game_id, bet.round_number), payout))
        total += payout
    return BettingLedger(odds.model_name, bets.model_name, tuple(entries), total)


@dataclass(frozen=True)
class HeadToHeadRow:
    superior: str
    inferior: str
    difference: float
    superior_profit: float
    inferior_profit: float
    tie: bool = False  # equal profits: neither model is superior


def head_to_head(
    traces: dict[str, PredictionTrace], round_number: int | None = None
) -> tuple[HeadToHeadRow, ...]:
    """Pairwise comparison: each model bets against the other's odds; the one
    with the higher profit as bettor is superior. Rows sort by the profit gap;
    exact profit ties are flagged and ordered by name."""
    if len(traces) < 2:
        raise EvaluationError("need at least 2 models")
    _check_alignment(traces)
    names = sorted(traces)
    rows = []
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            profit_a = betting_game(traces[b], traces[a], round_number).net
            profit_b = betting_game(traces[a], traces[b], round_number).net
            if profit_b > profit_a:
                winner_name, loser_name = b, a
                w_profit, l_profit = profit_b, profit_a
            else:
                winner_name, loser_name = a, b
                w_profit, l_profit = profit_a, profit_b
            rows.append(
                HeadToHeadRow(
                    winner_name,
                    loser_name,
                    abs(profit_a - profit_b),
                    w_profit,
                    l_profit,
                    tie=profit_a == profit_b,
                )
            )
    rows.sort(key=lambda r: (-r.difference, r.superior, r.inferior))
    return tuple(rows)


@dataclass(frozen=True)
class EvaluationReport:
    brier: BrierTable
    betting_matrix_all_rounds: dict[str, dict[str, float]]  # odds model -> bettor -> net
    betting_matrix_round1: dict[str, dict[str, float]]
    head_to_head_all_rounds: tuple[HeadToHeadRow, ...]
    head_to_head_round1: tuple[HeadToHeadRow, ...]

    def to_json_dict(self) -> dict:
        def matrix(m: dict[str, dict[str, float]]) -> dict:
            return {odds: dict(row) for odds, row in m.items()}

        def h2h(rows: tuple[HeadToHeadRow, ...]) -> list[dict]:
            return [
                {
                    "superior": None if r.tie else r.superior,
                    "inferior": None if r.tie else r.inferior,
                    "models": sorted((r.superior, r.inferior)),
                    "difference": r.difference,
                    "superior_profit": r.superior_profit,
                    "inferior_profit": r.inferior_profit,
                    "tie": r.tie,
                }
                for r in rows
            ]

        return {
            "brier_table": self.brier.to_json_dict(),
            "betting_matrix_all_rounds": matrix(self.betting_matrix_all_rounds),
            "betting_matrix_round1": matrix(self.betting_matrix_round1),
            "head_to_head": h2h(self.head_to_head_all_rounds),
            "head_to_head_round1": h2h(self.head_to_head_round1),
        }


def _betting_matrix(
    traces: dict[str, PredictionTrace], round_number: int | None
) -> dict[str, dict[str, float]]:
    names = sorted(traces)
    matrix: dict[str, dict[str, float]] = {}
    for odds_name in names:
        row = {}
        for bet_name in names:
            if odds_name == bet_name:
                row[bet_name] = 0.0
            else:
                row[bet_name] = betting_game(
                    traces[odds_name], traces[bet_name], round_number
                ).net
        matrix[odds_name] = row
    return matrix


def build_report(traces: dict[str, PredictionTrace]) -> EvaluationReport:
    _check_alignment(traces)
    return EvaluationReport(
        brier=brier_table(traces),
        betting_matrix_all_rounds=_betting_matrix(traces, None),
        betting_matrix_round1=_betting_matrix(traces, 1),
        head_to_head_all_rounds=head_to_head(traces, None),
        head_to_head_round1=head_to_head(traces, 1),
    )


def report_to_text(report: EvaluationReport) -> str:
    """Aligned human-readable rendering: Brier to 4 decimals, profits to 6."""
    names = list(report.brier.models)
    width = max(12, *(len(n) for n in names))
    lines = ["Brier score by round (* = row best)"]
    header = f"{'':>16} {'n':>6} " + " ".join(f"{n:>{width}}" for n in names)
    lines.append(header)
    for row in report.brier.rows:
        cells = []
        for n in names:
            marker = "*" if n == row.best else " "
            cells.append(f"{row.scores[n]:>{width - 1}.4f}{marker}")
        lines.append(f"{row.label:>16} {row.n:>6} " + " ".join(cells))

    for title, matrix in (
        ("Betting game, bets every round (odds setter x bettor)", report.betting_matrix_all_rounds),
        ("Betting game, bets at game start only", report.betting_matrix_round1),
    ):
        lines.append("")
        lines.append(title)
        lines.append(f"{'':>{width}} " + " ".join(f"{n:>{width}}" for n in names))
        for odds_name in names:
            cells = " ".join(
                f"{matrix[odds_name][b]:>{width}.6f}" for b in names
            )
            lines.append(f"{odds_name:>{width}} " + cells)

    lines.append("")
    lines.append("Head-to-head (bets every round)")
    lines.append(f"{'superior':>{width}} {'inferior':>{width}} {'difference':>12}")
    for row in report.head_to_head_all_rounds:
        label = f"{row.superior:>{width}} {row.inferior:>{width}} {row.difference:>12.6f}"
        if row.tie:
            label += "  (tie)"
        lines.append(label)
    return "\n".join(lines) + "\n"
