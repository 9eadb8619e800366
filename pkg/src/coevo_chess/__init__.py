"""Chess engine built on two co-evolving populations of move-sequence chromosomes."""

from .board import (
    WHITE, BLACK, PAWN, ROOK, KNIGHT, BISHOP, QUEEN, KING,
    Board, Move, PieceId, Termination,
    initial_board, board_from_fen, to_fen, parse_move, format_move,
    legal_moves, apply_move, in_check, detect_termination, is_technical_tie,
    IllegalMoveError, ParseError,
)
from .engine import CoevoEngine, EngineConfig, choose_move
from .evaluation import evaluate_board, evaluate_mixed
from .genome import Chromosome, NoLegalMoveError
from .tables import ScoreTables, default_tables, load_score_tables

__all__ = [name for name in dir() if not name.startswith("_")]
