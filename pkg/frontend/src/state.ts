// Pure mapping from a service snapshot plus transient selection to the
// view model the DOM layer renders. No chess legality is computed here:
// targets come from the snapshot's legal_moves and the server rejects
// anything else.

import type { Breakdown, Color, Snapshot } from "./api.js";

export interface Selection {
  from: string | null;
}

export interface CellView {
  square: string;
  piece: string | null; // placement token, e.g. "wn2"
  selected: boolean;
  target: boolean;
}

export interface Bar {
  label: string;
  value: number;
}

export type BannerKind = "info" | "thinking" | "finished" | "error";

export interface ViewModel {
  cells: CellView[]; // a1..h8
  banner: string;
  bannerKind: BannerKind;
  inputEnabled: boolean;
  thinking: boolean;
  moveLines: string[];
  bars: Bar[];
}

export class MalformedSnapshot extends Error {}

const FILES = "abcdefgh";

export function squareName(index: number): string {
  return `${FILES[index % 8]}${Math.floor(index / 8) + 1}`;
}

export function squareIndex(square: string): number {
  return FILES.indexOf(square[0] ?? "") + (Number(square[1]) - 1) * 8;
}

const GLYPHS: Record<string, string> = {
  wk: "♔", wq: "♕", wr: "♖", wb: "♗", wn: "♘", wp: "♙",
  bk: "♚", bq: "♛", br: "♜", bb: "♝", bn: "♞", bp: "♟",
};

export function glyph(token: string): string {
  return GLYPHS[token.slice(0, 2)] ?? "?";
}

export function pieceColor(token: string): Color {
  return token[0] === "w" ? "white" : "black";
}

/** Throws MalformedSnapshot unless the value has the v1 snapshot shape. */
export function checkSnapshot(snap: unknown): Snapshot {
  const s = snap as Snapshot;
  const ok =
    s !== null &&
    typeof s === "object" &&
    s.v === 1 &&
    (s.status === "awaiting_human" || s.status === "engine_thinking" ||
      s.status === "finished") &&
    (s.human === "white" || s.human === "black") &&
    Array.isArray(s.placement) &&
    s.placement.length === 64 &&
    Array.isArray(s.legal_moves) &&
    Array.isArray(s.move_log) &&
    typeof s.ply === "number";
  if (!ok) throw new MalformedSnapshot("snapshot does not match schema v1");
  return s;
}

function sideLabel(color: Color): string {
  return color === "white" ? "White" : "Black";
}

const OUTCOME_LABELS: Record<string, string> = {
  checkmate: "Checkmate",
  stalemate_defeat: "Stalemate",
  full_block_defeat: "Fully blocked",
  resigned: "Resigned",
};

export function banner(snap: Snapshot): { text: string; kind: BannerKind } {
  if (snap.status === "engine_thinking") {
    return { text: "Engine is thinking", kind: "thinking" };
  }
  if (snap.status === "awaiting_human") {
    return { text: `Your move (${sideLabel(snap.human)})`, kind: "info" };
  }
  const term = snap.termination;
  if (!term) return { text: "Finished", kind: "finished" };
  if (term.outcome === "technical_tie") {
    return { text: "Technical tie", kind: "finished" };
  }
  const label = OUTCOME_LABELS[term.outcome] ?? term.outcome;
  const by = term.winner ? ` — ${sideLabel(term.winner)} wins` : "";
  return { text: `${label}${by}`, kind: "finished" };
}

/** Destination squares of the selected piece, read off legal_moves. */
export function legalTargets(snap: Snapshot, from: string): string[] {
  const out: string[] = [];
  const kingHome = snap.human === "white" ? "e1" : "e8";
  const rank = snap.human === "white" ? "1" : "8";
  for (const move of snap.legal_moves) {
    if (move === "O-O") {
      if (from === kingHome) out.push(`g${rank}`);
    } else if (move === "O-O-O") {
      if (from === kingHome) out.push(`c${rank}`);
    } else if (move.startsWith(from)) {
      const to = move.slice(2, 4);
      if (!out.includes(to)) out.push(to);
    }
  }
  return out;
}

/** Move text for a from/to gesture; promotion letter appended when given. */
export function moveText(from: string, to: string, promotion?: string): string {
  return `${from}${to}${promotion ?? ""}`;
}

/** A human pawn is about to reach the last rank: ask which piece. */
export function needsPromotion(snap: Snapshot, from: string, to: string): boolean {
  const piece = snap.placement[squareIndex(from)];
  if (!piece || piece.slice(0, 2) !== (snap.human === "white" ? "wp" : "bp")) {
    return false;
  }
  return to[1] === (snap.human === "white" ? "8" : "1");
}

const BAR_PAIRS: (keyof Pick<
  Breakdown, "material" | "ap" | "rp" | "mobility" | "proximity"
>)[] = ["material", "ap", "rp", "mobility", "proximity"];

/** Six signed bars: the five own-minus-opponent pairs plus the mp term. */
export function netBars(breakdown: Breakdown): Bar[] {
  const bars: Bar[] = BAR_PAIRS.map((key) => {
    const [own, opp] = breakdown[key];
    return { label: key, value: own - opp };
  });
  bars.push({ label: "mp", value: breakdown.mp });
  return bars;
}

function moveLines(snap: Snapshot): string[] {
  return snap.move_log.map((rec) => {
    const n = Math.floor(rec.ply / 2) + 1;
    const dots = rec.ply % 2 === 0 ? "." : "...";
    return `${n}${dots} ${rec.move} (${rec.mover})`;
  });
}

export function viewModel(snapshot: Snapshot, selection: Selection): ViewModel {
  const snap = checkSnapshot(snapshot);
  const targets =
    selection.from && snap.status === "awaiting_human"
      ? legalTargets(snap, selection.from)
      : [];
  const cells: CellView[] = [];
  for (let i = 0; i < 64; i++) {
    const square = squareName(i);
    cells.push({
      square,
      piece: snap.placement[i] ?? null,
      selected: selection.from === square,
      target: targets.includes(square),
    });
  }
  const { text, kind } = banner(snap);
  return {
    cells,
    banner: text,
    bannerKind: kind,
    inputEnabled: snap.status === "awaiting_human",
    thinking: snap.status === "engine_thinking",
    moveLines: moveLines(snap),
    bars: snap.last_breakdown ? netBars(snap.last_breakdown) : [],
  };
}
