// Session state machine: one maze at a time under fog of war, a stopwatch
// from first render to goal, exactly one result submission per maze.

import { SessionApi, type Dir, type SessionStats, type ViewWindow } from "./api.js";
import { Stopwatch } from "./timer.js";
import { clearError, renderView, showError } from "./view.js";
import { renderChart } from "./chart.js";

export type Arm = "update" | "control";

export interface GameElements {
  view: HTMLElement;
  banner: HTMLElement;
  status: HTMLElement;
  chart: HTMLElement;
  summary: HTMLElement;
}

const KEY_DIRS: Record<string, Dir> = {
  ArrowUp: "up",
  ArrowRight: "right",
  ArrowDown: "down",
  ArrowLeft: "left",
  w: "up",
  d: "right",
  s: "down",
  a: "left",
  W: "up",
  D: "right",
  S: "down",
  A: "left",
};

export function keyToDir(key: string): Dir | null {
  return KEY_DIRS[key] ?? null;
}

export class GameController {
  sessionId: string | null = null;
  arm: Arm = "update";
  mazeIndex = 0;
  setSize = 0;
  solveTimes: number[] = [];
  finished = false;

  private timer: Stopwatch;
  private submitted = false;
  private inFlight = false;

  constructor(
    private api: SessionApi,
    private el: GameElements,
    private now: () => number = () => performance.now(),
  ) {
    this.timer = new Stopwatch(this.now);
  }

  async start(arm: Arm, opts: { n?: number; set_size?: number; seed?: number } = {}): Promise<void> {
    this.arm = arm;
    const created = await this.api.createSession({
      ...opts,
      update_enabled: arm === "update",
    });
    this.sessionId = created.id;
    this.setSize = created.set_size;
    this.mazeIndex = 0;
    this.solveTimes = [];
    this.finished = false;
    await this.beginMaze();
  }

  /** Fresh stopwatch, then first view; the clock starts at that render. */
  private async beginMaze(): Promise<void> {
    this.timer = new Stopwatch(this.now);
    this.submitted = false;
    await this.refreshView();
  }

  private async refreshView(): Promise<ViewWindow | null> {
    if (!this.sessionId) return null;
    try {
      const view = await this.api.getView(this.sessionId);
      renderView(this.el.view, view);
      clearError(this.el.banner);
      this.mazeIndex = view.maze_index;
      if (!this.timer.started) this.timer.start();
      this.el.status.textContent = `maze ${view.maze_index + 1} of ${this.setSize} (${this.arm} arm)`;
      return view;
    } catch (err) {
      showError(this.el.banner, `view failed: ${(err as Error).message}`);
      return null;
    }
  }

  async handleKey(key: string): Promise<void> {
    const dir = keyToDir(key);
    if (!dir || !this.sessionId || this.finished || this.inFlight || !this.timer.running) return;
    this.inFlight = true;
    try {
      const result = await this.api.move(this.sessionId, dir);
      if (result.blocked) {
        this.el.view.classList.add("bump");
        setTimeout(() => this.el.view.classList.remove("bump"), 120);
        return;
      }
      if (result.reached_goal) {
        await this.finishMaze();
        return;
      }
      await this.refreshView();
    } catch (err) {
      showError(this.el.banner, `move failed: ${(err as Error).message}`);
    } finally {
      this.inFlight = false;
    }
  }

  /** Stop the clock, submit the solve time exactly once, advance. */
  private async finishMaze(): Promise<void> {
    if (this.submitted || !this.sessionId) return;
    this.submitted = true;
    const solveTimeS = this.timer.stop() / 1000;
    this.solveTimes.push(solveTimeS);
    const outcome = await this.api.submitResult(this.sessionId, solveTimeS);
    if (outcome.status === "set_complete") {
      this.finished = true;
      this.showSummary(outcome.stats);
    } else {
      await this.beginMaze();
    }
  }

  private showSummary(stats: SessionStats): void {
    this.el.summary.textContent =
      `set complete: ${stats.solve_times.length} mazes, ` +
      `mean solve time ${mean(stats.solve_times).toFixed(2)}s`;
    renderChart(this.el.chart, stats.sma_increase_rate);
  }

  /** Refresh the chart mid-set from the server's stats endpoint. */
  async updateChart(): Promise<void> {
    if (!this.sessionId) return;
    const stats = await this.api.getStats(this.sessionId);
    renderChart(this.el.chart, stats.sma_increase_rate);
  }
}

function mean(xs: number[]): number {
  return xs.length ? xs.reduce((s, v) => s + v, 0) / xs.length : 0;
}
