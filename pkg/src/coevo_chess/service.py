"""Human-vs-engine game sessions and their persistence.

A session walks AwaitingHuman -> EngineThinking -> AwaitingHuman ...
-> Finished. Every move is appended to the session's log file before
the in-memory state changes, so a crash recovers by replaying the log
through the rules core. The engine deliberates under a time budget
(default 10 s) and is cut at a generation boundary, keeping the best
move found so far.
"""

import dataclasses
import json
import threading
from dataclasses import dataclass
from pathlib import Path

from .board import (BLACK, ONGOING, WHITE, IllegalMoveError, ParseError,
                    Termination, format_move, initial_board, parse_move,
                    to_fen)
from .engine import CoevoEngine, EngineConfig
from .evaluation import evaluate_board
from .genome import NoLegalMoveError

__all__ = [
    "AWAITING_HUMAN", "ENGINE_THINKING", "FINISHED", "RESIGNED",
    "SCHEMA_VERSION", "WrongTurn", "GameSession", "SessionManager",
    "color_name", "parse_color",
]

AWAITING_HUMAN = "awaiting_human"
ENGINE_THINKING = "engine_thinking"
FINISHED = "finished"

RESIGNED = "resigned"

SCHEMA_VERSION = 1
DEFAULT_TIME_BUDGET = 10.0


class WrongTurn(Exception):
    """Move submitted while it is not the human's turn."""


def color_name(color: int) -> str:
    return "white" if color == WHITE else "black"


def parse_color(name: str) -> int:
    try:
        return {"white": WHITE, "black": BLACK}[name]
    except KeyError:
        raise ValueError(f"color must be 'white' or 'black', not {name!r}") from None


@dataclass(frozen=True, slots=True)
class LogEntry:
    ply: int
    mover: str        # "human" or "engine"
    move: str
    breakdown: dict | None = None

    def as_dict(self) -> dict:
        out = {"v": SCHEMA_VERSION, "type": "move", "ply": self.ply,
               "mover": self.mover, "move": self.move}
        if self.breakdown is not None:
            out["breakdown"] = self.breakdown
        return out


class GameSession:
    """One game. sync=True deliberates inline; otherwise a worker thread
    computes the engine reply while status shows EngineThinking."""

    def __init__(self, session_id: str, config: EngineConfig, human_color: int,
                 tables=None, log_path=None, sync: bool = True):
        if config.time_budget is None:
            config = dataclasses.replace(config, time_budget=DEFAULT_TIME_BUDGET)
        self.id = session_id
        self.config = config
        self.human_color = human_color
        self.engine_color = 1 - human_color
        self.engine = CoevoEngine(self.engine_color, config, tables=tables)
        self.board = initial_board()
        self.move_log: list[LogEntry] = []
        self.status = AWAITING_HUMAN
        self.termination = None
        self.last_breakdown = None
        self._sync = sync
        self._lock = threading.RLock()
        self._thread = None
        self._log_path = Path(log_path) if log_path is not None else None
        if self._log_path is not None and not self._log_path.exists():
            self._persist({"v": SCHEMA_VERSION, "type": "header",
                           "session": session_id,
                           "human": color_name(human_color),
                           "config": dataclasses.asdict(config)})
        self._after_board_change(ack_engine_turn=True)

    # ---- persistence ----

    def _persist(self, record: dict):
        if self._log_path is None:
            return
        with self._log_path.open("a") as fh:
            fh.write(json.dumps(record) + "\n")
            fh.flush()

    # ---- state machine ----

    def _after_board_change(self, ack_engine_turn: bool):
        """Settle status after a move (or at creation)."""
        verdict = self.board.detect_termination()
        if verdict.outcome != ONGOING:
            self.termination = verdict
            self.status = FINISHED
            return
        if self.board.side == self.engine_color:
            self.status = ENGINE_THINKING
            if ack_engine_turn:
                self._start_engine()
        else:
            self.status = AWAITING_HUMAN

    def _start_engine(self):
        if self._sync:
            self._engine_turn()
        else:
            self._thread = threading.Thread(target=self._engine_turn,
                                            daemon=True)
            self._thread.start()

    def _engine_turn(self):
        board = self.board
        try:
            move, _diag = self.engine.select_move(board)
        except NoLegalMoveError:
            # terminal positions are caught before deliberation; only a
            # rules bug lands here
            raise
        after = board.apply(move)
        breakdown = evaluate_board(after, self.engine_color).as_dict()
        entry = LogEntry(board.ply, "engine", format_move(move), breakdown)
        with self._lock:
            if self.status == FINISHED:
                return   # human resigned mid-deliberation; drop the move
            self._persist(entry.as_dict())
            self.board = after
            self.move_log.append(entry)
            self.last_breakdown = breakdown
            self._after_board_change(ack_engine_turn=False)

    def submit_human_move(self, text: str):
        """Validate and apply a human move; engine reply follows.

        Raises ParseError / IllegalMoveError (state untouched) or
        WrongTurn when it is not the human's move.
        """
        with self._lock:
            if self.status != AWAITING_HUMAN:
                raise WrongTurn(f"session is {self.status}")
            move = parse_move(self.board, text)
            entry = LogEntry(self.board.ply, "human", format_move(move))
            self._persist(entry.as_dict())
            self.board = self.board.apply(move)
            self.move_log.append(entry)
            self._after_board_change(ack_engine_turn=False)
        # deliberation starts outside the lock so snapshots never block
        if self.status == ENGINE_THINKING:
            self._start_engine()
        return self

    def resign(self):
        """Human resigns; the engine wins. Allowed until the game ends."""
        with self._lock:
            if self.status == FINISHED:
                raise WrongTurn("session is finished")
            self._persist({"v": SCHEMA_VERSION, "type": "resign",
                           "ply": self.board.ply})
            self.termination = Termination(RESIGNED, winner=self.engine_color,
                                           loser=self.human_color)
            self.status = FINISHED
        return self

    def wait_for_engine(self, timeout: float | None = None) -> bool:
        """Block until an async deliberation finishes; True when idle."""
        thread = self._thread
        if thread is not None and thread.is_alive():
            thread.join(timeout)
            return not thread.is_alive()
        return True

    # ---- snapshots ----

    def snapshot(self) -> dict:
        """Wire-format session state; plain JSON-serializable data."""
        with self._lock:
            legal = ([format_move(m) for m in self.board.legal_moves()]
                     if self.status == AWAITING_HUMAN else [])
            term = None
            if self.termination is not None:
                term = {"outcome": self.termination.outcome,
                        "winner": (None if self.termination.winner is None
                                   else color_name(self.termination.winner))}
            return {
                "v": SCHEMA_VERSION,
                "session": self.id,
                "status": self.status,
                "human": color_name(self.human_color),
                "side_to_move": color_name(self.board.side),
                "ply": self.board.ply,
                "fen": to_fen(self.board),
                "placement": _placement_list(self.board),
                "legal_moves": sorted(legal),
                "move_log": [e.as_dict() for e in self.move_log],
                "last_breakdown": self.last_breakdown,
                "termination": term,
            }

    def log_records(self) -> list[dict]:
        with self._lock:
            return [e.as_dict() for e in self.move_log]


_KIND_LETTERS = "prnbqk"


def _placement_list(board) -> list:
    """64 cells a1..h8; null or a piece token like "wn2"."""
    out = []
    for sq in range(64):
        p = board.placement[sq]
        if p < 0:
            out.append(None)
        else:
            color = "w" if p >> 7 == WHITE else "b"
            kind = _KIND_LETTERS[(p >> 4) & 7]
            out.append(f"{color}{kind}{(p & 15) + 1}")
    return out


class SessionManager:
    """Holds live sessions; optionally persists and recovers them."""

    def __init__(self, log_dir=None, sync: bool = True, tables=None):
        self._dir = Path(log_dir) if log_dir is not None else None
        if self._dir is not None:
            self._dir.mkdir(parents=True, exist_ok=True)
        self._sync = sync
        self._tables = tables
        self._sessions: dict[str, GameSession] = {}
        self._lock = threading.Lock()
        self._counter = 0

    def _next_id(self) -> str:
        existing = set(self._sessions)
        if self._dir is not None:
            existing |= {p.stem for p in self._dir.glob("g*.log")}
        while True:
            self._counter += 1
            sid = f"g{self._counter:04d}"
            if sid not in existing:
                return sid

    def create_session(self, config: EngineConfig | None = None,
                       human_color: int = WHITE) -> GameSession:
        if config is None:
            config = EngineConfig()
        with self._lock:
            sid = self._next_id()
            path = self._dir / f"{sid}.log" if self._dir is not None else None
            session = GameSession(sid, config, human_color,
                                  tables=self._tables, log_path=path,
                                  sync=self._sync)
            self._sessions[sid] = session
            return session

    def get(self, session_id: str) -> GameSession:
        return self._sessions[session_id]

    def list_sessions(self) -> list[dict]:
        with self._lock:
            items = sorted(self._sessions.values(), key=lambda s: s.id)
        return [{"session": s.id, "status": s.status,
                 "human": color_name(s.human_color), "ply": s.board.ply}
                for s in items]

    def get_log(self, session_id: str) -> list[dict]:
        return self.get(session_id).log_records()

    # ---- crash recovery ----

    def recover(self) -> list[str]:
        """Rebuild sessions from log files; returns recovered ids.

        The log is the source of truth: moves replay through the rules
        core to an identical board. Engine populations are not durable,
        so a recovered engine re-seeds its populations on its next turn;
        if the crash happened mid-deliberation the engine's turn simply
        restarts.
        """
        if self._dir is None:
            return []
        recovered = []
        for path in sorted(self._dir.glob("g*.log")):
            sid = path.stem
            if sid in self._sessions:
                continue
            session = _recover_session(path, tables=self._tables,
                                       sync=self._sync)
            if session is not None:
                self._sessions[sid] = session
                recovered.append(sid)
        return recovered


def _read_log(path: Path) -> list[dict]:
    records = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError:
            break  # torn final line from a crash mid-write
    return records


def _recover_session(path: Path, tables=None, sync: bool = True):
    records = _read_log(path)
    if not records or records[0].get("type") != "header":
        return None
    header = records[0]
    config = EngineConfig(**header["config"])
    session = GameSession.__new__(GameSession)
    session.id = header["session"]
    session.config = config
    session.human_color = parse_color(header["human"])
    session.engine_color = 1 - session.human_color
    session.engine = CoevoEngine(session.engine_color, config, tables=tables)
    session.board = initial_board()
    session.move_log = []
    session.termination = None
    session.last_breakdown = None
    session._sync = sync
    session._lock = threading.RLock()
    session._thread = None
    session._log_path = path
    resigned = False
    for rec in records[1:]:
        if rec.get("type") == "resign":
            resigned = True
            continue
        if rec.get("type") != "move":
            continue
        move = parse_move(session.board, rec["move"])
        session.board = session.board.apply(move)
        entry = LogEntry(rec["ply"], rec["mover"], rec["move"],
                         rec.get("breakdown"))
        session.move_log.append(entry)
        if entry.breakdown is not None:
            session.last_breakdown = entry.breakdown
    if resigned:
        session.termination = Termination(RESIGNED,
                                          winner=session.engine_color,
                                          loser=session.human_color)
        session.status = FINISHED
    else:
        session._after_board_change(ack_engine_turn=True)
    return session
