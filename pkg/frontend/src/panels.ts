// Side panels: status banner, move list, score-breakdown bars, and the
// promotion picker dialog.

import type { Bar, ViewModel } from "./state.js";
import { glyph } from "./state.js";

export function renderBanner(el: HTMLElement, vm: ViewModel, error: string | null): void {
  el.className = `banner ${error ? "error" : vm.bannerKind}`;
  el.textContent = error ?? vm.banner;
  if (!error && vm.thinking) {
    const spinner = document.createElement("span");
    spinner.className = "spinner";
    spinner.textContent = " ⏳";
    el.appendChild(spinner);
  }
}

export function renderMoves(el: HTMLElement, vm: ViewModel): void {
  el.textContent = "";
  for (const line of vm.moveLines) {
    const row = document.createElement("div");
    row.className = "move-line";
    row.textContent = line;
    el.appendChild(row);
  }
  el.scrollTop = el.scrollHeight;
}

const BAR_SCALE = 200; // points that fill a half-track

function barWidth(value: number): string {
  const frac = Math.min(Math.abs(value) / BAR_SCALE, 1);
  return `${(frac * 50).toFixed(1)}%`;
}

export function renderBars(el: HTMLElement, bars: Bar[]): void {
  el.textContent = "";
  if (!bars.length) return;
  const title = document.createElement("div");
  title.className = "bars-title";
  title.textContent = "engine's last move, by category";
  el.appendChild(title);
  for (const bar of bars) {
    const row = document.createElement("div");
    row.className = "bar-row";
    const label = document.createElement("span");
    label.className = "bar-label";
    label.textContent = bar.label;
    const track = document.createElement("div");
    track.className = "bar-track";
    const fill = document.createElement("div");
    fill.className = "bar-fill " + (bar.value < 0 ? "neg" : "pos");
    fill.style.width = barWidth(bar.value);
    track.appendChild(fill);
    const value = document.createElement("span");
    value.className = "bar-value";
    value.textContent = bar.value > 0 ? `+${bar.value}` : `${bar.value}`;
    row.appendChild(label);
    row.appendChild(track);
    row.appendChild(value);
    el.appendChild(row);
  }
}

const PROMOTION_CHOICES: [string, string][] = [
  ["q", "queen"], ["r", "rook"], ["b", "bishop"], ["n", "knight"],
];

/**
 * Modal with the four promotion pieces; resolves with the chosen letter,
 * or null when dismissed by clicking outside the choices.
 */
export function promotionDialog(
  root: HTMLElement,
  color: "white" | "black",
): Promise<string | null> {
  return new Promise((resolve) => {
    const overlay = document.createElement("div");
    overlay.className = "promotion-overlay";
    const box = document.createElement("div");
    box.className = "promotion-dialog";
    const done = (choice: string | null) => {
      overlay.remove();
      resolve(choice);
    };
    for (const [letter, name] of PROMOTION_CHOICES) {
      const btn = document.createElement("button");
      btn.className = "promotion-choice";
      btn.dataset.piece = letter;
      btn.title = name;
      btn.textContent = glyph((color === "white" ? "w" : "b") + letter);
      btn.addEventListener("click", () => done(letter));
      box.appendChild(btn);
    }
    overlay.addEventListener("click", (ev) => {
      if (ev.target === overlay) done(null);
    });
    overlay.appendChild(box);
    root.appendChild(overlay);
  });
}
