// Game controller: owns the session, the polling loop and the transient
// selection. UI state is a pure function of the latest snapshot plus the
// selection; every redraw rebuilds from those. At most one service
// request is in flight at a time and responses older than the current
// ply are discarded.

import { ServiceError } from "./api.js";
import type { Color, EngineConfigBody, GameApi, Snapshot } from "./api.js";
import { renderBoard } from "./board.js";
import { promotionDialog, renderBanner, renderBars, renderMoves } from "./panels.js";
import {
  MalformedSnapshot, Selection, checkSnapshot, moveText, needsPromotion,
  pieceColor, squareIndex, viewModel,
} from "./state.js";

export interface Dom {
  board: HTMLElement;
  banner: HTMLElement;
  notice: HTMLElement;
  moves: HTMLElement;
  bars: HTMLElement;
  dialogRoot: HTMLElement;
  retry: HTMLElement;
}

export interface CtrlOptions {
  pollMs?: number;
}

export class GameCtrl {
  snap: Snapshot | null = null;
  selection: Selection = { from: null };
  notice: string | null = null; // move rejection, shown under the banner
  failure: string | null = null; // transport failure, shown with retry
  private inFlight = false;
  private pollTimer: ReturnType<typeof setTimeout> | null = null;
  private readonly pollMs: number;

  constructor(
    private readonly api: GameApi,
    private readonly dom: Dom,
    opts: CtrlOptions = {},
  ) {
    this.pollMs = opts.pollMs ?? 500;
  }

  get session(): string | null {
    return this.snap ? this.snap.session : null;
  }

  async newGame(color: Color, config?: EngineConfigBody): Promise<void> {
    this.snap = null;
    this.selection = { from: null };
    this.notice = null;
    await this.call(() => this.api.createSession(color, config));
  }

  async refresh(): Promise<void> {
    const sid = this.session;
    if (sid) await this.call(() => this.api.getState(sid));
  }

  async resign(): Promise<void> {
    const sid = this.session;
    if (sid) await this.call(() => this.api.resign(sid));
  }

  /** Board click: select own piece, or fire the selected move at the server. */
  handleSquareClick(square: string): void {
    const snap = this.snap;
    if (!snap || snap.status !== "awaiting_human") return;
    const piece = snap.placement[squareIndex(square)];
    const own = piece != null && pieceColor(piece) === snap.human;
    if (this.selection.from === null) {
      if (!own) return; // opponent piece or empty square: nothing to do
      this.selection = { from: square };
    } else if (square === this.selection.from) {
      this.selection = { from: null };
    } else if (own) {
      this.selection = { from: square };
    } else {
      void this.trySubmit(this.selection.from, square);
      return;
    }
    this.redraw();
  }

  handleDrop(from: string, to: string): void {
    const snap = this.snap;
    if (!snap || snap.status !== "awaiting_human") return;
    const piece = snap.placement[squareIndex(from)];
    if (piece == null || pieceColor(piece) !== snap.human) return;
    this.selection = { from };
    void this.trySubmit(from, to);
  }

  private async trySubmit(from: string, to: string): Promise<void> {
    const snap = this.snap;
    if (!snap || snap.status !== "awaiting_human") return;
    let promotion: string | undefined;
    if (needsPromotion(snap, from, to)) {
      const choice = await promotionDialog(this.dom.dialogRoot, snap.human);
      if (choice === null) {
        this.redraw(); // dismissed: selection stays for another try
        return;
      }
      promotion = choice;
    }
    const sid = snap.session;
    const text = moveText(from, to, promotion);
    await this.call(() => this.api.postMove(sid, text));
  }

  /**
   * Run one service request. Accepts the snapshot unless stale, maps
   * rejections to the notice line and transport failures to the retry
   * banner. Drops the request when another one is still in flight.
   */
  private async call(send: () => Promise<Snapshot>): Promise<void> {
    if (this.inFlight) return;
    this.inFlight = true;
    try {
      const snap = await send();
      this.failure = null;
      this.notice = null;
      this.accept(snap);
    } catch (err) {
      if (err instanceof ServiceError) {
        this.notice = `rejected: ${err.message}`;
      } else if (err instanceof MalformedSnapshot) {
        this.failure = "Malformed service response";
      } else {
        this.failure = "Service unreachable";
      }
    } finally {
      this.inFlight = false;
    }
    this.redraw();
    this.schedulePoll();
  }

  private accept(raw: Snapshot): void {
    const snap = checkSnapshot(raw); // malformed input never becomes state
    const current = this.snap;
    if (current && snap.session === current.session && snap.ply < current.ply) {
      return; // stale response from before the latest known state
    }
    if (!current || snap.session !== current.session || snap.ply !== current.ply) {
      this.selection = { from: null }; // board changed under the selection
    }
    this.snap = snap;
    if (snap.status !== "awaiting_human") this.selection = { from: null };
  }

  private schedulePoll(): void {
    if (this.pollTimer !== null) {
      clearTimeout(this.pollTimer);
      this.pollTimer = null;
    }
    if (!this.snap || this.snap.status !== "engine_thinking") return;
    this.pollTimer = setTimeout(() => {
      this.pollTimer = null;
      if (!this.inFlight) void this.refresh();
      else this.schedulePoll();
    }, this.pollMs);
  }

  redraw(): void {
    const { dom } = this;
    dom.retry.classList.toggle("hidden", this.failure === null);
    dom.notice.textContent = this.notice ?? "";
    if (!this.snap) {
      renderBanner(dom.banner, emptyView(), this.failure);
      return;
    }
    try {
      const vm = viewModel(this.snap, this.selection);
      renderBanner(dom.banner, vm, this.failure);
      renderBoard(dom.board, vm, this.snap.human, {
        onSquareClick: (sq) => this.handleSquareClick(sq),
        onDrop: (from, to) => this.handleDrop(from, to),
      });
      renderMoves(dom.moves, vm);
      renderBars(dom.bars, vm.bars);
    } catch (err) {
      if (!(err instanceof MalformedSnapshot)) throw err;
      renderBanner(dom.banner, emptyView(), "Malformed service response");
    }
  }
}

function emptyView() {
  return {
    cells: [],
    banner: "No game",
    bannerKind: "info" as const,
    inputEnabled: false,
    thinking: false,
    moveLines: [],
    bars: [],
  };
}
