"""HTTP API for live scorekeeping with per-round win probabilities.

Games are kept in memory behind per-game locks (single writer per game) and
optionally journaled to an append-only JSONL file that is replayed on
startup. Probabilities come from the same fitted bundle the CLI uses, so a
``predict`` call for the recorded state returns bit-identical numbers.
Simulation models are reseeded per game from the game id, which keeps
displayed values stable across page refreshes.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone

from fastapi import FastAPI
from fastapi.requests import Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .core import GameState, RoundScores, VALID_SCORES, apply_round
from .dataset import CSV_HEADER, format_timestamp
from .models import ModelBundle


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, detail=None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail

    def response(self) -> JSONResponse:
        body = {"code": self.code, "message": self.message, "detail": self.detail}
        return JSONResponse(status_code=self.status, content=body)


def _game_seed(bundle_seed: int, game_id: str) -> int:
    h = 0xCBF29CE484222325  # FNV-1a over the game id, mixed with the bundle seed
    for byte in game_id.encode("utf-8"):
        h = ((h ^ byte) * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return (h ^ (bundle_seed & 0xFFFFFFFFFFFFFFFF)) or 1


@dataclass
class LiveGame:
    game_id: str
    p1: str
    p2: str
    created_at: datetime
    state: GameState
    history: list[dict] = field(default_factory=list)
    rounds: list[RoundScores] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def winner(self) -> str | None:
        return self.state.leader if self.state.terminal else None


class LiveStore:
    def __init__(
        self,
        bundle: ModelBundle,
        journal_path: str | None = None,
        strict_roster: bool | None = None,
    ):
        self.bundle = bundle
        self.rules = bundle.config.rules
        self.strict_roster = (
            bundle.config.strict_roster if strict_roster is None else strict_roster
        )
        self.journal_path = journal_path
        self._games: dict[str, LiveGame] = {}
        self._registry_lock = threading.Lock()
        self._journal_lock = threading.Lock()
        if journal_path:
            self._replay_journal(journal_path)

    # -- model access -----------------------------------------------------

    def _models_for_game(self, game_id: str) -> dict[str, object]:
        seed = _game_seed(self.bundle.config.seed, game_id)
        models = dict(self.bundle.models())
        models["basic_sim"] = models["basic_sim"].with_seed(seed)
        models["adjusted_sim"] = models["adjusted_sim"].with_seed(seed)
        return models

    def probabilities(self, game: LiveGame) -> dict[str, float]:
        state = game.state
        return {
            name: model.predict(game.p1, game.p2, state.s1, state.s2)
            for name, model in self._models_for_game(game.game_id).items()
        }

    # -- journal ----------------------------------------------------------

    def _append_journal(self, event: dict) -> None:
        if not self.journal_path:
            return
        with self._journal_lock:
            with open(self.journal_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(event, sort_keys=True) + "\n")

    def _replay_journal(self, path: str) -> None:
        try:
            fh = open(path, "r", encoding="utf-8")
        except FileNotFoundError:
            return
        with fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                event = json.loads(line)
                if event["type"] == "game_created":
                    self._create(
                        event["p1"],
                        event["p2"],
                        game_id=event["game_id"],
                        created_at=datetime.fromisoformat(event["created_at"]),
                        journal=False,
                    )
                elif event["type"] == "round":
                    game = self._games[event["game_id"]]
                    rnd = RoundScores(
                        tuple(event["round"]["p1_throws"]),
                        tuple(event["round"]["p2_throws"]),
                    )
                    self._apply_round(game, rnd, event["seq"], journal=False)

    # -- game lifecycle ---------------------------------------------------

    def _create(
        self,
        p1: str,
        p2: str,
        game_id: str | None = None,
        created_at: datetime | None = None,
        journal: bool = True,
    ) -> LiveGame:
        if not p1 or not p2:
            raise ApiError(400, "MissingPlayer", "both p1 and p2 are required")
        if p1 == p2:
            raise ApiError(400, "SamePlayer", "a game needs two distinct players")
        if self.strict_roster:
            for player in (p1, p2):
                if player not in self.bundle.roster:
                    raise ApiError(
                        404, "UnknownPlayer", f"{player!r} is not in the fitted roster"
                    )
        game_id = game_id or uuid.uuid4().hex[:12]
        created_at = created_at or datetime.now(timezone.utc).replace(
            second=0, microsecond=0, tzinfo=None
        )
        game = LiveGame(
            game_id=game_id,
            p1=p1,
            p2=p2,
            created_at=created_at,
            state=GameState(p1, p2, rules=self.rules),
        )
        game.history.append(
            {
                "round_number": 0,
                "totals": [0, 0],
                "probabilities": self.probabilities(game),
            }
        )
        with self._registry_lock:
            if game_id in self._games:
                raise ApiError(409, "DuplicateGame", f"game {game_id!r} already exists")
            self._games[game_id] = game
        if journal:
            self._append_journal(
                {
                    "type": "game_created",
                    "game_id": game_id,
                    "seq": 0,
                    "p1": p1,
                    "p2": p2,
                    "created_at": format_timestamp(created_at),
                }
            )
        return game

    def create_game(self, p1: str, p2: str) -> LiveGame:
        return self._create(p1, p2)

    def get(self, game_id: str) -> LiveGame:
        game = self._games.get(game_id)
        if game is None:
            raise ApiError(404, "NoSuchGame", f"no game {game_id!r}")
        return game

    def _apply_round(
        self, game: LiveGame, rnd: RoundScores, seq: int, journal: bool = True
    ) -> dict:
        # caller holds game.lock (or is the single-threaded journal replay)
        state = apply_round(game.state, rnd)
        game.state = state
        game.rounds.append(rnd)
        entry = {
            "round_number": state.rounds_played,
            "totals": [state.s1, state.s2],
            "probabilities": self.probabilities(game),
        }
        if state.terminal:
            entry["winner"] = state.leader
        game.history.append(entry)
        if journal:
            self._append_journal(
                {
                    "type": "round",
                    "game_id": game.game_id,
                    "seq": seq,
                    "round": {
                        "p1_throws": list(rnd.p1_throws),
                        "p2_throws": list(rnd.p2_throws),
                    },
                    "totals": [state.s1, state.s2],
                    "timestamp": format_timestamp(
                        datetime.now(timezone.utc).replace(tzinfo=None)
                    ),
                }
            )
        return entry

    def submit_round(self, game_id: str, body: dict) -> tuple[LiveGame, dict]:
        game = self.get(game_id)
        throws = _validate_round_body(body)
        with game.lock:
            if game.state.terminal:
                raise ApiError(
                    409,
                    "GameAlreadyOver",
                    f"game finished {game.state.s1}-{game.state.s2}; no more rounds",
                    detail={"winner": game.winner},
                )
            expected = game.state.rounds_played + 1
            round_index = body.get("round_index")
            if round_index is not None:
                if not isinstance(round_index, int):
                    raise ApiError(422, "BadRoundIndex", "round_index must be an integer")
                if round_index < expected:
                    raise ApiError(
                        409,
                        "DuplicateRound",
                        f"round {round_index} was already submitted",
                        detail={"expected": expected},
                    )
                if round_index > expected:
                    raise ApiError(
                        409,
                        "RoundOutOfOrder",
                        f"expected round {expected}, got {round_index}",
                        detail={"expected": expected},
                    )
            entry = self._apply_round(game, RoundScores(*throws), expected)
        return game, entry

    def roster_view(self) -> list[dict]:
        out = []
        for player, stats in sorted(self.bundle.roster_stats.items()):
            row = {"player": player}
            row.update(stats)
            out.append(row)
        return out

    def export_csv(self) -> str:
        lines = [CSV_HEADER]
        for game_id in sorted(self._games):
            game = self._games[game_id]
            if not game.state.terminal:
                continue
            stamp = format_timestamp(game.created_at)
            for number, rnd in enumerate(game.rounds, start=1):
                for pts in rnd.p1_throws:
                    lines.append(f"{game_id},{stamp},{number},{game.p1},{game.p2},{pts}")
                for pts in rnd.p2_throws:
                    lines.append(f"{game_id},{stamp},{number},{game.p2},{game.p1},{pts}")
        return "\n".join(lines) + "\n"


def _validate_round_body(body: dict) -> tuple[tuple[int, int, int], tuple[int, int, int]]:
    throws = []
    for side in ("p1_throws", "p2_throws"):
        values = body.get(side)
        if not isinstance(values, list) or len(values) != 3:
            raise ApiError(422, "BadRound", f"{side} must be a list of exactly 3 scores")
        for position, value in enumerate(values):
            if isinstance(value, bool) or not isinstance(value, int) or value not in VALID_SCORES:
                raise ApiError(
                    422,
                    "InvalidScore",
                    f"{side}[{position}] = {value!r} is not a legal throw score",
                    detail={"position": f"{side}[{position}]", "value": value},
                )
        throws.append(tuple(values))
    return tuple(throws)


def _game_view(game: LiveGame) -> dict:
    # take the game lock so totals and history come from the same snapshot
    with game.lock:
        view = {
            "game_id": game.game_id,
            "p1": game.p1,
            "p2": game.p2,
            "created_at": format_timestamp(game.created_at),
            "totals": [game.state.s1, game.state.s2],
            "rounds_played": game.state.rounds_played,
            "terminal": game.state.terminal,
            "history": list(game.history),
        }
        if game.winner:
            view["winner"] = game.winner
    return view


def create_app(
    bundle: ModelBundle,
    journal_path: str | None = None,
    strict_roster: bool | None = None,
    static_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="Darts 271 live scoring", docs_url=None, redoc_url=None)
    store = LiveStore(bundle, journal_path, strict_roster)
    app.state.store = store

    @app.exception_handler(ApiError)
    async def handle_api_error(_: Request, exc: ApiError):
        return exc.response()

    @app.get("/api/health")
    def health():
        return {
            "status": "ok",
            "schema_version": bundle.schema_version,
            "cutoff": bundle.cutoff.isoformat(timespec="minutes"),
            "models": sorted(bundle.models()),
            "players": len(bundle.roster),
            "games_live": len(store._games),
        }

    @app.get("/api/players")
    def players():
        return {"players": store.roster_view()}

    @app.post("/api/games", status_code=201)
    async def create_game(request: Request):
        body = await request.json()
        game = store.create_game(body.get("p1"), body.get("p2"))
        return {
            "game_id": game.game_id,
            "p1": game.p1,
            "p2": game.p2,
            "probabilities": game.history[0]["probabilities"],
        }

    @app.post("/api/games/{game_id}/rounds")
    async def submit_round(game_id: str, request: Request):
        body = await request.json()
        game, entry = store.submit_round(game_id, body)
        response = {
            "game_id": game.game_id,
            "round_number": entry["round_number"],
            "totals": entry["totals"],
            "terminal": "winner" in entry,
        }
        if "winner" in entry:
            response["winner"] = entry["winner"]
        else:
            response["probabilities"] = entry["probabilities"]
        return response

    @app.get("/api/games/{game_id}")
    def get_game(game_id: str):
        return _game_view(store.get(game_id))

    @app.get("/api/export.csv")
    def export_csv():
        return PlainTextResponse(store.export_csv(), media_type="text/csv")

    if static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="scoreboard")

    return app
