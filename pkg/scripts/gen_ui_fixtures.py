"""Regenerate the browser UI test fixtures from the live session layer.

The UI test suite replays real wire snapshots instead of hand-written
ones; run this after any change to the snapshot schema and commit the
files under frontend/tests/fixtures/.
"""
import json
import sys
import threading
from pathlib import Path

from coevo_chess.board import parse_move
from coevo_chess.engine import EngineConfig
from coevo_chess.service import AWAITING_HUMAN, ENGINE_THINKING, GameSession, parse_color

OUT = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"


class Scripted:
    """Engine stand-in replaying a fixed move list."""

    def __init__(self, texts):
        self.texts = list(texts)

    def select_move(self, board):
        return parse_move(board, self.texts.pop(0)), None


class Blocking(Scripted):
    """Scripted engine that waits for release(), to freeze EngineThinking."""

    def __init__(self, texts):
        super().__init__(texts)
        self.started = threading.Event()
        self.gate = threading.Event()

    def select_move(self, board):
        self.started.set()
        self.gate.wait(5.0)
        return super().select_move(board)


def session(replies, sync=True):
    cfg = EngineConfig(population_size=6, generations=2, depth=0,
                       mix_white=2, mix_black=2, rng_seed=11)
    s = GameSession("fixture", cfg, parse_color("white"), sync=sync)
    s.engine = replies
    return s


def scholar_fixture():
    s = session(Scripted(["e7e5", "b8c6", "g8f6"]))
    snaps = [s.snapshot()]
    for text in ("e2e4", "d1h5", "f1c4", "h5f7"):
        s.submit_human_move(text)
        snaps.append(s.snapshot())
    assert snaps[-1]["status"] == "finished"
    assert snaps[-1]["termination"] == {"outcome": "checkmate", "winner": "white"}
    return snaps


def thinking_fixture():
    engine = Blocking(["e7e5"])
    s = session(engine, sync=False)
    s.submit_human_move("e2e4")
    engine.started.wait(5.0)
    thinking = s.snapshot()
    assert thinking["status"] == ENGINE_THINKING
    engine.gate.set()
    s.wait_for_engine(5.0)
    settled = s.snapshot()
    assert settled["status"] == AWAITING_HUMAN and settled["ply"] == 2
    return {"thinking": thinking, "settled": settled}


def promotion_fixture():
    s = session(Scripted(["b7b5", "a7a6", "c8b7", "d7d5"]))
    for text in ("a2a4", "a4b5", "b5a6", "a6b7"):
        s.submit_human_move(text)
    snap = s.snapshot()
    assert snap["status"] == AWAITING_HUMAN
    # the b8 knight blocks the push; promotion here is the a8 capture
    for text in ("b7a8q", "b7a8r", "b7a8b", "b7a8n"):
        assert text in snap["legal_moves"], text
    return snap


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    fixtures = {
        "initial.json": session(Scripted([])).snapshot(),
        "scholar.json": scholar_fixture(),
        "thinking.json": thinking_fixture(),
        "promotion.json": promotion_fixture(),
    }
    for name, data in fixtures.items():
        (OUT / name).write_text(json.dumps(data, indent=1) + "\n")
        print(f"wrote {OUT / name}")


if __name__ == "__main__":
    sys.exit(main())
