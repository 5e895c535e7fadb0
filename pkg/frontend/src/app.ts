// The scoreboard itself: new-game picker, six-field round entry, totals,
// per-model gauges, and the by-round chart. All numbers shown are service
// responses; the client recomputes nothing.

import { ApiError, type GameView, type ScoreboardApi } from "./api.js";
import { illegalPositions } from "./board.js";
import { renderProbabilityChart } from "./chart.js";

const POLL_MS = 2000;

interface AppState {
  gameId: string | null;
  view: GameView | null;
  pending: boolean;
  pollTimer: ReturnType<typeof setInterval> | null;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export class ScoreboardApp {
  private readonly state: AppState = {
    gameId: null,
    view: null,
    pending: false,
    pollTimer: null,
  };

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ScoreboardApi,
    private readonly pollMs: number = POLL_MS,
  ) {}

  async start(): Promise<void> {
    this.root.innerHTML = "";
    this.root.appendChild(el("h1", {}, "Darts 271 scoreboard"));
    await this.renderNewGameForm();
  }

  // ---- new game ----------------------------------------------------------

  private async renderNewGameForm(): Promise<void> {
    const form = el("form", { id: "new-game-form" });
    const message = el("p", { id: "roster-message", class: "hint" });
    const error = el("p", { id: "form-error", class: "error", role: "alert" });
    const p1 = el("select", { id: "player1-select", name: "p1" });
    const p2 = el("select", { id: "player2-select", name: "p2" });
    const startButton = el("button", { id: "start-game", type: "submit" }, "Start game");

    const players = await this.api.players();
    if (players.length === 0) {
      message.textContent =
        "No players in the fitted roster yet. Fit a model on recorded games first.";
      startButton.disabled = true;
    } else {
      for (const select of [p1, p2]) {
        for (const entry of players) {
          const option = el("option", { value: entry.player });
          option.textContent = `${entry.player} (${entry.games} games, ${(
            entry.win_rate * 100
          ).toFixed(0)}% wins)`;
          select.appendChild(option);
        }
      }
      p2.selectedIndex = Math.min(1, players.length - 1);
    }

    const guard = () => {
      startButton.disabled = players.length === 0 || p1.value === p2.value;
    };
    p1.addEventListener("change", guard);
    p2.addEventListener("change", guard);
    guard();

    form.appendChild(labelled("Player 1", p1));
    form.appendChild(labelled("Player 2", p2));
    form.appendChild(startButton);
    form.appendChild(message);
    form.appendChild(error);
    form.addEventListener("submit", async (event) => {
      event.preventDefault();
      error.textContent = "";
      try {
        const created = await this.api.createGame(p1.value, p2.value);
        this.state.gameId = created.game_id;
        await this.refresh();
        this.startPolling();
      } catch (err) {
        error.textContent = err instanceof ApiError ? err.message : String(err);
      }
    });

    this.root.appendChild(form);
  }

  // ---- game screen -------------------------------------------------------

  private gameScreen(): HTMLElement {
    let screen = this.root.querySelector<HTMLElement>("#game-screen");
    if (screen) {
      return screen;
    }
    screen = el("section", { id: "game-screen" });
    this.root.querySelector("#new-game-form")?.remove();

    screen.appendChild(el("h2", { id: "matchup" }));
    screen.appendChild(el("p", { id: "totals", class: "totals" }));
    screen.appendChild(el("p", { id: "winner-banner", class: "banner", hidden: "" }));

    const entry = el("form", { id: "round-entry" });
    for (const side of ["p1", "p2"] as const) {
      const fieldset = el("fieldset", { id: `${side}-throws` });
      fieldset.appendChild(el("legend", { id: `${side}-legend` }));
      for (let slot = 0; slot < 3; slot++) {
        const input = el("input", {
          type: "number",
          inputmode: "numeric",
          required: "",
          "data-side": side,
          "data-slot": String(slot),
          id: `${side}-throw-${slot}`,
        }) as HTMLInputElement;
        fieldset.appendChild(input);
      }
      entry.appendChild(fieldset);
    }
    entry.appendChild(el("button", { id: "update-totals", type: "submit" }, "Update Totals"));
    entry.appendChild(el("p", { id: "round-error", class: "error", role: "alert" }));
    entry.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submitRound();
    });
    screen.appendChild(entry);

    screen.appendChild(el("div", { id: "gauges" }));
    screen.appendChild(el("div", { id: "chart-holder" }));
    this.root.appendChild(screen);
    return screen;
  }

  async refresh(): Promise<void> {
    if (!this.state.gameId) {
      return;
    }
    this.state.view = await this.api.game(this.state.gameId);
    this.render();
  }

  private render(): void {
    const view = this.state.view;
    if (!view) {
      return;
    }
    const screen = this.gameScreen();
    (screen.querySelector("#matchup") as HTMLElement).textContent =
      `${view.p1} vs ${view.p2}`;
    (screen.querySelector("#totals") as HTMLElement).textContent =
      `${view.totals[0]} – ${view.totals[1]}`;
    (screen.querySelector("#p1-legend") as HTMLElement).textContent = view.p1;
    (screen.querySelector("#p2-legend") as HTMLElement).textContent = view.p2;

    const banner = screen.querySelector("#winner-banner") as HTMLElement;
    if (view.terminal && view.winner) {
      banner.hidden = false;
      banner.textContent = `${view.winner} wins`;
      this.lockEntry("game over");
      this.stopPolling();
      this.ensureNewGameButton(screen);
    } else {
      banner.hidden = true;
      banner.textContent = "";
    }

    const latest = view.history[view.history.length - 1];
    this.renderGauges(latest ? latest.probabilities : {}, view.p1);
    const holder = screen.querySelector("#chart-holder") as HTMLElement;
    holder.innerHTML = "";
    holder.appendChild(renderProbabilityChart(view.history, view.p1));
  }

  private renderGauges(probabilities: Record<string, number>, p1: string): void {
    const holder = this.root.querySelector("#gauges") as HTMLElement;
    holder.innerHTML = "";
    holder.appendChild(el("h3", {}, `win probability: ${p1}`));
    for (const model of Object.keys(probabilities).sort()) {
      const value = probabilities[model];
      const gauge = el("div", { class: "gauge", "data-model": model });
      gauge.appendChild(el("span", { class: "gauge-label" }, model));
      const bar = el("div", { class: "gauge-bar" });
      const fill = el("div", { class: "gauge-fill" });
      fill.style.width = `${(value * 100).toFixed(1)}%`;
      bar.appendChild(fill);
      gauge.appendChild(bar);
      gauge.appendChild(el("span", { class: "gauge-value" }, value.toFixed(3)));
      holder.appendChild(gauge);
    }
  }

  // ---- round submission ----------------------------------------------------

  private inputs(): HTMLInputElement[] {
    return Array.from(
      this.root.querySelectorAll<HTMLInputElement>("#round-entry input"),
    );
  }

  private clearFieldErrors(): void {
    for (const input of this.inputs()) {
      input.classList.remove("field-error");
    }
    const error = this.root.querySelector("#round-error") as HTMLElement;
    error.textContent = "";
  }

  private markField(side: string, slot: number, message: string): void {
    const input = this.root.querySelector<HTMLInputElement>(
      `input[data-side="${side}"][data-slot="${slot}"]`,
    );
    input?.classList.add("field-error");
    (this.root.querySelector("#round-error") as HTMLElement).textContent = message;
  }

  private ensureNewGameButton(screen: HTMLElement): void {
    if (screen.querySelector("#another-game")) {
      return;
    }
    const button = el("button", { id: "another-game", type: "button" }, "New game");
    button.addEventListener("click", () => {
      this.stopPolling();
      this.state.gameId = null;
      this.state.view = null;
      void this.start();
    });
    screen.appendChild(button);
  }

  private lockEntry(reason: string): void {
    for (const input of this.inputs()) {
      input.disabled = true;
    }
    const button = this.root.querySelector<HTMLButtonElement>("#update-totals");
    if (button) {
      button.disabled = true;
      button.title = reason;
    }
  }

  async submitRound(): Promise<void> {
    const view = this.state.view;
    if (!view || this.state.pending || view.terminal) {
      return;
    }
    this.clearFieldErrors();

    const values = this.inputs().map((input) => Number(input.value));
    if (this.inputs().some((input) => input.value.trim() === "")) {
      (this.root.querySelector("#round-error") as HTMLElement).textContent =
        "enter all six throws";
      return;
    }
    // mirror the board rules locally for fast feedback; the server re-checks
    const bad = illegalPositions(values);
    if (bad.length > 0) {
      for (const index of bad) {
        const side = index < 3 ? "p1" : "p2";
        this.markField(side, index % 3, `${values[index]} is not a dart score`);
      }
      return;
    }

    const button = this.root.querySelector<HTMLButtonElement>("#update-totals")!;
    this.state.pending = true;
    button.disabled = true;
    try {
      const response = await this.api.submitRound(
        view.game_id,
        values.slice(0, 3),
        values.slice(3),
        view.rounds_played + 1,
      );
      for (const input of this.inputs()) {
        input.value = ""; // cleared on success, same as the scorekeeping site
      }
      await this.refresh();
      if (!response.terminal) {
        button.disabled = false;
      }
    } catch (err) {
      button.disabled = false;
      if (err instanceof ApiError && err.status === 422 && err.detail) {
        const detail = err.detail as { position?: string };
        const match = /^(p[12])_throws\[(\d)\]$/.exec(detail.position ?? "");
        if (match) {
          this.markField(match[1], Number(match[2]), err.message);
        } else {
          (this.root.querySelector("#round-error") as HTMLElement).textContent =
            err.message;
        }
      } else if (err instanceof ApiError && err.status === 409) {
        await this.refresh(); // shows the finished banner and locks entry
      } else {
        (this.root.querySelector("#round-error") as HTMLElement).textContent =
          err instanceof ApiError ? err.message : String(err);
      }
    } finally {
      this.state.pending = false;
    }
  }

  // ---- polling -------------------------------------------------------------

  private startPolling(): void {
    if (this.pollMs <= 0 || this.state.pollTimer !== null) {
      return;
    }
    this.state.pollTimer = setInterval(() => {
      void this.refresh().catch(() => undefined);
    }, this.pollMs);
  }

  stopPolling(): void {
    if (this.state.pollTimer !== null) {
      clearInterval(this.state.pollTimer);
      this.state.pollTimer = null;
    }
  }
}

function labelled(text: string, control: HTMLElement): HTMLElement {
  const wrap = el("label", { class: "field" });
  wrap.appendChild(el("span", {}, text));
  wrap.appendChild(control);
  return wrap;
}

export function initScoreboard(
  root: HTMLElement,
  api: ScoreboardApi,
  pollMs: number = POLL_MS,
): ScoreboardApp {
  const app = new ScoreboardApp(root, api, pollMs);
  void app.start();
  return app;
}
