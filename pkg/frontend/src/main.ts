// Page bootstrap: wire the DOM containers to a GameCtrl against the
// local service. `?base=http://127.0.0.1:8000` points elsewhere.

import { ApiClient } from "./api.js";
import { GameCtrl } from "./app.js";

function el(id: string): HTMLElement {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing #${id}`);
  return found;
}

export function boot(): GameCtrl {
  const params = new URLSearchParams(window.location.search);
  const api = new ApiClient(params.get("base") ?? "");
  const ctrl = new GameCtrl(api, {
    board: el("board"),
    banner: el("banner"),
    notice: el("notice"),
    moves: el("moves"),
    bars: el("bars"),
    dialogRoot: document.body,
    retry: el("retry"),
  });
  el("new-white").addEventListener("click", () => void ctrl.newGame("white"));
  el("new-black").addEventListener("click", () => void ctrl.newGame("black"));
  el("resign").addEventListener("click", () => void ctrl.resign());
  el("retry").addEventListener("click", () => void ctrl.refresh());
  ctrl.redraw();
  return ctrl;
}

if (typeof document !== "undefined" && document.getElementById("board")) {
  boot();
}
