// In-memory stand-in for the live service with the same validation and
// history semantics, so UI tests can intercept every "network" call.

import {
  ApiError,
  type GameView,
  type HistoryEntry,
  type NewGameResponse,
  type PlayerSummary,
  type RoundResponse,
  type ScoreboardApi,
} from "../src/api.js";
import { isLegalScore } from "../src/board.js";

const MODELS = ["adjusted_sim", "basic_sim", "logistic", "null", "sdmm"];
const THRESHOLD = 271;

interface FakeGame {
  view: GameView;
}

function probabilitiesFor(totals: [number, number]): Record<string, number> {
  // arbitrary but deterministic per state; the UI must show these verbatim
  const lead = (totals[0] - totals[1]) / 400;
  const out: Record<string, number> = {};
  MODELS.forEach((model, index) => {
    const offset = (index - 2) * 0.013;
    out[model] = Math.min(1, Math.max(0, 0.5 + lead + offset));
  });
  return out;
}

export class FakeApi implements ScoreboardApi {
  roster: PlayerSummary[];
  games = new Map<string, FakeGame>();
  submitCalls = 0;
  rejectNextRoundAt: string | null = null; // e.g. "p2_throws[2]"
  submitDelay: Promise<void> | null = null;
  private nextId = 1;

  constructor(players: string[] = ["Alice", "Bob", "Cara"]) {
    this.roster = players.map((player, index) => ({
      player,
      games: 10 + index,
      wins: 5,
      win_rate: 0.5,
      avg_points_per_throw: 12.5,
    }));
  }

  async players(): Promise<PlayerSummary[]> {
    return this.roster;
  }

  async createGame(p1: string, p2: string): Promise<NewGameResponse> {
    if (p1 === p2) {
      throw new ApiError(400, "SamePlayer", "a game needs two distinct players");
    }
    if (!this.roster.some((r) => r.player === p1) || !this.roster.some((r) => r.player === p2)) {
      throw new ApiError(404, "UnknownPlayer", "player not in the fitted roster");
    }
    const gameId = `fake${this.nextId++}`;
    const initial: HistoryEntry = {
      round_number: 0,
      totals: [0, 0],
      probabilities: probabilitiesFor([0, 0]),
    };
    this.games.set(gameId, {
      view: {
        game_id: gameId,
        p1,
        p2,
        totals: [0, 0],
        rounds_played: 0,
        terminal: false,
        history: [initial],
      },
    });
    return { game_id: gameId, p1, p2, probabilities: initial.probabilities };
  }

  async submitRound(
    gameId: string,
    p1Throws: number[],
    p2Throws: number[],
    roundIndex: number,
  ): Promise<RoundResponse> {
    this.submitCalls += 1;
    if (this.submitDelay) {
      await this.submitDelay;
    }
    const game = this.games.get(gameId);
    if (!game) {
      throw new ApiError(404, "NoSuchGame", `no game ${gameId}`);
    }
    const view = game.view;
    if (view.terminal) {
      throw new ApiError(409, "GameAlreadyOver", "game finished; no more rounds", {
        winner: view.winner,
      });
    }
    if (roundIndex !== view.rounds_played + 1) {
      throw new ApiError(409, "DuplicateRound", `round ${roundIndex} already submitted`, {
        expected: view.rounds_played + 1,
      });
    }
    if (this.rejectNextRoundAt) {
      const position = this.rejectNextRoundAt;
      this.rejectNextRoundAt = null;
      throw new ApiError(422, "InvalidScore", "not a legal throw score", { position });
    }
    const sides: Array<[string, number[]]> = [
      ["p1_throws", p1Throws],
      ["p2_throws", p2Throws],
    ];
    for (const [name, values] of sides) {
      values.forEach((value, slot) => {
        if (!isLegalScore(value)) {
          throw new ApiError(422, "InvalidScore", `${value} is not a legal throw score`, {
            position: `${name}[${slot}]`,
            value,
          });
        }
      });
    }

    const totals: [number, number] = [
      view.totals[0] + p1Throws.reduce((a, b) => a + b, 0),
      view.totals[1] + p2Throws.reduce((a, b) => a + b, 0),
    ];
    view.totals = totals;
    view.rounds_played += 1;
    const terminal =
      totals[0] !== totals[1] && Math.max(totals[0], totals[1]) >= THRESHOLD;
    const entry: HistoryEntry = {
      round_number: view.rounds_played,
      totals: [...totals] as [number, number],
      probabilities: terminal
        ? Object.fromEntries(MODELS.map((m) => [m, totals[0] > totals[1] ? 1 : 0]))
        : probabilitiesFor(totals),
    };
    if (terminal) {
      view.terminal = true;
      view.winner = totals[0] > totals[1] ? view.p1 : view.p2;
      entry.winner = view.winner;
    }
    view.history.push(entry);

    const response: RoundResponse = {
      game_id: gameId,
      round_number: view.rounds_played,
      totals: [...totals] as [number, number],
      terminal,
    };
    if (terminal) {
      response.winner = view.winner;
    } else {
      response.probabilities = entry.probabilities;
    }
    return response;
  }

  async game(gameId: string): Promise<GameView> {
    const game = this.games.get(gameId);
    if (!game) {
      throw new ApiError(404, "NoSuchGame", `no game ${gameId}`);
    }
    return JSON.parse(JSON.stringify(game.view)) as GameView;
  }
}
