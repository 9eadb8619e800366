// DOM board: renders the 64 cells of a view model and turns pointer
// gestures into (from, to) square callbacks. Rebuild-on-render keeps it
// a pure function of the view model.

import type { ViewModel } from "./state.js";
import { glyph, pieceColor } from "./state.js";

export interface BoardHandlers {
  onSquareClick(square: string): void;
  onDrop(from: string, to: string): void;
}

export function renderBoard(
  root: HTMLElement,
  vm: ViewModel,
  humanColor: "white" | "black",
  handlers: BoardHandlers,
): void {
  root.textContent = "";
  root.classList.add("board");
  // rank 8 first so the white side sits at the bottom of the grid
  for (let rank = 7; rank >= 0; rank--) {
    for (let file = 0; file < 8; file++) {
      const cell = vm.cells[rank * 8 + file];
      if (!cell) continue;
      const el = document.createElement("div");
      el.className = "square " + ((rank + file) % 2 ? "light" : "dark");
      if (cell.selected) el.classList.add("selected");
      if (cell.target) el.classList.add("target");
      el.dataset.square = cell.square;
      if (cell.piece) {
        const piece = document.createElement("span");
        piece.className = "piece";
        piece.textContent = glyph(cell.piece);
        piece.dataset.token = cell.piece;
        const own = pieceColor(cell.piece) === humanColor;
        if (own && vm.inputEnabled) {
          piece.draggable = true;
          piece.addEventListener("dragstart", (ev) => {
            ev.dataTransfer?.setData("text/plain", cell.square);
          });
        }
        el.appendChild(piece);
      }
      el.addEventListener("click", () => handlers.onSquareClick(cell.square));
      el.addEventListener("dragover", (ev) => ev.preventDefault());
      el.addEventListener("drop", (ev) => {
        ev.preventDefault();
        const from = ev.dataTransfer?.getData("text/plain");
        if (from && from !== cell.square) handlers.onDrop(from, cell.square);
      });
      root.appendChild(el);
    }
  }
}
