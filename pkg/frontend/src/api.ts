// Typed client for the live-scoring JSON API. The scoreboard never computes
// probabilities itself; everything rendered comes back from these calls.

export interface PlayerSummary {
  player: string;
  games: number;
  wins: number;
  win_rate: number;
  avg_points_per_throw: number;
}

export interface HistoryEntry {
  round_number: number;
  totals: [number, number];
  probabilities: Record<string, number>;
  winner?: string;
}

export interface GameView {
  game_id: string;
  p1: string;
  p2: string;
  totals: [number, number];
  rounds_played: number;
  terminal: boolean;
  winner?: string;
  history: HistoryEntry[];
}

export interface NewGameResponse {
  game_id: string;
  p1: string;
  p2: string;
  probabilities: Record<string, number>;
}

export interface RoundResponse {
  game_id: string;
  round_number: number;
  totals: [number, number];
  terminal: boolean;
  winner?: string;
  probabilities?: Record<string, number>;
}

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly detail: unknown;

  constructor(status: number, code: string, message: string, detail?: unknown) {
    super(message);
    this.status = status;
    this.code = code;
    this.detail = detail;
  }
}

export interface ScoreboardApi {
  players(): Promise<PlayerSummary[]>;
  createGame(p1: string, p2: string): Promise<NewGameResponse>;
  submitRound(
    gameId: string,
    p1Throws: number[],
    p2Throws: number[],
    roundIndex: number,
  ): Promise<RoundResponse>;
  game(gameId: string): Promise<GameView>;
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const code = typeof body.code === "string" ? body.code : "HttpError";
    const message = typeof body.message === "string" ? body.message : response.statusText;
    throw new ApiError(response.status, code, message, body.detail);
  }
  return body as T;
}

export class HttpScoreboardApi implements ScoreboardApi {
  constructor(private readonly base: string = "") {}

  players(): Promise<PlayerSummary[]> {
    return request<{ players: PlayerSummary[] }>(`${this.base}/api/players`).then(
      (body) => body.players,
    );
  }

  createGame(p1: string, p2: string): Promise<NewGameResponse> {
    return request(`${this.base}/api/games`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ p1, p2 }),
    });
  }

  submitRound(
    gameId: string,
    p1Throws: number[],
    p2Throws: number[],
    roundIndex: number,
  ): Promise<RoundResponse> {
    return request(`${this.base}/api/games/${gameId}/rounds`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({
        p1_throws: p1Throws,
        p2_throws: p2Throws,
        round_index: roundIndex,
      }),
    });
  }

  game(gameId: string): Promise<GameView> {
    return request(`${this.base}/api/games/${gameId}`);
  }
}
