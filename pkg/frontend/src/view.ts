// Fog-of-war renderer: exactly the served 5x5 window, player at the center
// tile, nothing else. No cell outside the payload is ever drawn or cached.

import type { ViewWindow } from "./api.js";

export const VIEW_SIDE = 5;

const TILE_CLASS: Record<string, string> = {
  "#": "wall",
  ".": "path",
  S: "start",
  G: "goal",
  "~": "oob",
};

export function validateWindow(v: ViewWindow): void {
  if (!v || !Array.isArray(v.cells) || v.cells.length !== VIEW_SIDE) {
    throw new Error("malformed view: need 5 rows");
  }
  for (const row of v.cells) {
    if (typeof row !== "string" || row.length !== VIEW_SIDE) {
      throw new Error("malformed view: need 5 columns per row");
    }
    for (const ch of row) {
      if (!(ch in TILE_CLASS)) throw new Error(`malformed view: unknown cell '${ch}'`);
    }
  }
}

export function renderView(container: HTMLElement, v: ViewWindow): void {
  validateWindow(v);
  container.replaceChildren();
  for (let r = 0; r < VIEW_SIDE; r++) {
    for (let c = 0; c < VIEW_SIDE; c++) {
      const ch = v.cells[r][c];
      const tile = container.ownerDocument.createElement("div");
      tile.className = `tile ${TILE_CLASS[ch]}`;
      tile.dataset.cell = ch;
      if (r === 2 && c === 2) {
        tile.classList.add("player");
        tile.dataset.player = "1";
      }
      container.appendChild(tile);
    }
  }
}

export function showError(banner: HTMLElement, message: string): void {
  banner.textContent = message;
  banner.classList.add("visible");
}

export function clearError(banner: HTMLElement): void {
  banner.textContent = "";
  banner.classList.remove("visible");
}
