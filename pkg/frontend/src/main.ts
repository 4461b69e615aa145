// Bootstrap: start screen with arm selection, keyboard wiring, chart refresh
// after each solved maze.

import { SessionApi } from "./api.js";
import { GameController, keyToDir, type Arm } from "./game.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function boot(): void {
  const api = new SessionApi("");
  const controller = new GameController(api, {
    view: el("view"),
    banner: el("banner"),
    status: el("status"),
    chart: el("chart"),
    summary: el("summary"),
  });

  const startScreen = el("start-screen");
  const gameScreen = el("game-screen");

  async function begin(arm: Arm): Promise<void> {
    startScreen.hidden = true;
    gameScreen.hidden = false;
    const n = parseInt((el<HTMLInputElement>("size-input")).value || "9", 10);
    await controller.start(arm, { n, set_size: 30 });
    await controller.updateChart();
  }

  el("start-update").addEventListener("click", () => void begin("update"));
  el("start-control").addEventListener("click", () => void begin("control"));

  let lastIndex = 0;
  document.addEventListener("keydown", (ev) => {
    if (!keyToDir(ev.key)) return;
    ev.preventDefault();
    void controller.handleKey(ev.key).then(() => {
      // One chart refresh per completed maze.
      if (controller.mazeIndex !== lastIndex && !controller.finished) {
        lastIndex = controller.mazeIndex;
        void controller.updateChart();
      }
    });
  });
}

document.addEventListener("DOMContentLoaded", boot);
