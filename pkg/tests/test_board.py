import random

import pytest
from hypothesis import given, settings, strategies as st

from coevo_chess.board import (
    WHITE, BLACK, PAWN, ROOK, KNIGHT, BISHOP, QUEEN, KING,
    NORMAL, CAPTURE, EN_PASSANT, CASTLE_SHORT, CASTLE_LONG, PROMOTION,
    CHECKMATE, TECHNICAL_TIE, STALEMATE_DEFEAT, FULL_BLOCK_DEFEAT, ONGOING,
    Board, Move, IllegalMoveError, ParseError,
    initial_board, board_from_fen, to_fen, parse_move, format_move,
    make_piece, piece_kind, piece_ordinal, parse_square, square_name,
    START_FEN,
)

from oracle import oracle_moves, production_moves, oracle_in_check

# positions chosen to cover pins, castling edge rules, en passant,
# promotions, double checks and blocked boards
CURATED_FENS = [
    START_FEN,
    "rnbqkbnr/pppppppp/8/8/4P3/8/PPPP1PPP/RNBQKBNR b KQkq - 0 1",
    "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1",
    "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R b KQkq - 0 1",
    "8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 0 1",
    "8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 b - - 0 1",
    "r3k2r/Pppp1ppp/1b3nbN/nP6/BBP1P3/q4N2/Pp1P2PP/R2Q1RK1 w kq - 0 1",
    "r2q1rk1/pP1p2pp/Q4n2/bbp1p3/Np6/1B3NBn/pPPP1PPP/R3K2R b KQ - 0 1",
    "rnbq1k1r/pp1Pbppp/2p5/8/2B5/8/PPP1NnPP/RNBQK2R w KQ - 1 8",
    "r4rk1/1pp1qppp/p1np1n2/2b1p1B1/2B1P1b1/P1NP1N2/1PP1QPPP/R4RK1 w - - 0 10",
    "4k3/8/8/1Pp5/8/8/8/4K3 w - c6 0 2",
    "4k3/8/8/KPp4r/8/8/8/8 w - c6 0 2",
    "n1n5/PPPk4/8/8/8/8/4Kppp/5N1N w - - 0 1",
    "n1n5/PPPk4/8/8/8/8/4Kppp/5N1N b - - 0 1",
    "4k3/8/8/8/8/8/6r1/4K2R w K - 0 1",
    "4k3/8/8/8/8/8/8/R3K2R w KQ - 0 1",
    "r3k2r/8/8/8/8/8/8/4K3 b kq - 0 1",
    "4k3/8/8/8/1b6/8/3P4/4K3 w - - 0 1",
    "4k3/8/8/8/8/4n3/8/4RK2 b - - 0 1",
    "8/8/8/2k5/2pP4/8/B7/4K3 b - d3 0 3",
    "4k3/4r3/8/8/8/3b4/8/4K3 w - - 0 1",
    "7k/5Q2/6K1/8/8/8/8/8 b - - 0 1",
    "6rk/6pp/8/8/8/8/8/5RKR w - - 0 1",
    "4k3/8/8/8/1p6/pPp5/PRP5/KB6 w - - 0 1",
    "8/8/8/8/8/2k5/1q6/K7 w - - 0 1",
]


@pytest.mark.parametrize("fen", CURATED_FENS)
def test_legal_moves_match_oracle(fen):
    board = board_from_fen(fen)
    assert production_moves(board) == oracle_moves(board)


@pytest.mark.parametrize("fen", CURATED_FENS)
def test_check_detection_matches_oracle(fen):
    board = board_from_fen(fen)
    for color in (WHITE, BLACK):
        assert board.in_check(color) == oracle_in_check(board, color)


def test_initial_position_has_twenty_moves():
    assert len(initial_board().legal_moves()) == 20


def _play(board, *texts):
    for t in texts:
        board = board.apply(parse_move(board, t))
    return board


def test_fools_mate():
    board = _play(initial_board(), "f2f3", "e7e5", "g2g4", "d8h4")
    term = board.detect_termination()
    assert term.outcome == CHECKMATE
    assert term.winner == BLACK
    assert not board.has_any_legal_move()


def test_stalemate_scored_as_defeat():
    board = board_from_fen("7k/5Q2/6K1/8/8/8/8/8 b - - 0 1")
    term = board.detect_termination()
    assert term.outcome == STALEMATE_DEFEAT
    assert term.loser == BLACK and term.winner == WHITE


def test_stalemate_fide_flag_turns_defeat_into_draw():
    board = board_from_fen("7k/5Q2/6K1/8/8/8/8/8 b - - 0 1")
    term = board.detect_termination(fide_stalemate=True)
    assert term.outcome == TECHNICAL_TIE


def test_fully_blocked_side_loses():
    board = board_from_fen("4k3/8/8/8/1p6/pPp5/PRP5/KB6 w - - 0 1")
    assert not list(board._pseudo_moves(WHITE))
    term = board.detect_termination()
    assert term.outcome == FULL_BLOCK_DEFEAT
    assert term.loser == WHITE


TIE_CASES = [
    ("4k3/8/8/8/8/8/8/4K3 w - - 0 1", True),
    ("4k3/8/8/8/8/8/8/4KN2 w - - 0 1", True),
    ("4k3/8/8/8/8/8/8/4KB2 w - - 0 1", True),
    ("3bk3/8/8/8/8/8/8/4KB2 w - - 0 1", True),
    ("3bk3/8/8/8/8/8/8/4KN2 w - - 0 1", True),
    ("4k3/8/8/8/8/8/8/3NKN2 w - - 0 1", True),
    ("3nk3/8/8/8/8/8/8/4KB2 w - - 0 1", True),
    ("4k3/8/8/8/8/8/8/3RK3 w - - 0 1", False),
    ("4k3/8/8/8/8/8/8/3QK3 w - - 0 1", False),
    ("4k3/p7/8/8/8/8/8/4KN2 w - - 0 1", False),
    ("3nk3/8/8/8/8/8/8/3NKN2 w - - 0 1", False),
    ("2bbk3/8/8/8/8/8/8/4KB2 w - - 0 1", False),
]


@pytest.mark.parametrize("fen,expected", TIE_CASES)
def test_technical_tie_material_table(fen, expected):
    assert board_from_fen(fen).is_technical_tie() is expected


def test_technical_tie_material_cases_break_with_extra_pawn():
    for fen, expected in TIE_CASES:
        if not expected:
            continue
        rows = fen.split()[0].split("/")
        assert rows[4] == "8"
        rows[4] = "p7"
        salted = "/".join(rows) + " " + " ".join(fen.split()[1:])
        assert board_from_fen(salted).is_technical_tie() is False


def _march_kings(board):
    return _play(board, "e1f1", "e8f8", "f1g1", "f8g8", "g1h1", "g8h8")


def test_repeated_moves_by_both_sides_tie():
    board = _march_kings(board_from_fen("1n2k3/8/8/8/8/8/8/1N2K3 w - - 0 1"))
    assert board.is_technical_tie()
    assert board.detect_termination().outcome == TECHNICAL_TIE


def test_repeated_moves_with_pawn_on_board_do_not_tie():
    board = _march_kings(board_from_fen("1n2k3/7p/8/8/8/8/8/1N2K3 w - - 0 1"))
    assert not board.is_technical_tie()


def test_repetition_needs_all_three_matching_moves():
    board = _play(board_from_fen("1n2k3/8/8/8/8/8/8/1N2K3 w - - 0 1"),
                  "e1f1", "e8f8", "f1g1", "f8g8", "g1g2", "g8h8")
    assert not board.is_technical_tie()


def test_en_passant_capture_removes_victim():
    board = board_from_fen("4k3/2p5/8/1P6/8/8/8/4K3 b - - 0 1")
    board = _play(board, "c7c5")
    ep = [m for m in board.legal_moves() if m.kind == EN_PASSANT]
    assert len(ep) == 1
    after = board.apply(ep[0])
    assert to_fen(after, include_ext=False).split()[0] == "4k3/8/2P5/8/8/8/8/4K3"


def test_en_passant_blocked_by_horizontal_pin():
    board = board_from_fen("4k3/8/8/KPp4r/8/8/8/8 w - c6 0 2")
    assert not any(m.kind == EN_PASSANT for m in board.legal_moves())


def test_all_four_promotion_kinds_generated():
    board = board_from_fen("8/P3k3/8/8/8/8/4K3/8 w - - 0 1")
    promos = {m.promotion for m in board.legal_moves() if m.kind == PROMOTION}
    assert promos == {QUEEN, ROOK, BISHOP, KNIGHT}


def test_promoted_piece_gets_fresh_ordinal():
    # the original queen keeps its identity even when captured, so a
    # promoted queen never reuses ordinal 1
    board = board_from_fen("8/P3k3/8/8/8/8/4K3/8 w - - 0 1")
    after = board.apply(parse_move(board, "a7a8q"))
    queens = [p for p in after.piece_sq
              if p >> 7 == WHITE and piece_kind(p) == QUEEN]
    assert len(queens) == 1
    assert piece_ordinal(queens[0]) == 2
    board2 = board_from_fen("8/P3k3/8/8/8/8/4K3/Q7 w - - 0 1")
    after2 = board2.apply(parse_move(board2, "a7a8q"))
    ordinals = sorted(piece_ordinal(p) for p in after2.piece_sq
                      if p >> 7 == WHITE and piece_kind(p) == QUEEN)
    assert ordinals == [1, 2]


def test_castling_through_attacked_square_rejected():
    board = board_from_fen("4k3/8/8/8/8/8/6r1/4K2R w K - 0 1")
    assert not any(m.kind == CASTLE_SHORT for m in board.legal_moves())


def test_castling_updates_rook_and_flags():
    board = board_from_fen("4k3/8/8/8/8/8/8/R3K2R w KQ - 0 1")
    short = board.apply(parse_move(board, "O-O"))
    assert to_fen(short, include_ext=False).split()[0].endswith("R4RK1")
    assert short.has_castled[WHITE] == 1
    assert short.king_moved[WHITE]
    long = board.apply(parse_move(board, "O-O-O"))
    assert to_fen(long, include_ext=False).split()[0].endswith("2KR3R")
    assert long.has_castled[WHITE] == 2


def test_rook_move_before_king_is_recorded():
    board = board_from_fen("4k3/8/8/8/8/8/8/R3K2R w KQ - 0 1")
    after = board.apply(parse_move(board, "h1g1"))
    assert make_piece(WHITE, ROOK, 2) in after.rooks_early
    # after the king has moved, rook moves are not flagged
    board2 = _play(board, "e1e2", "e8e7", "a1b1")
    assert make_piece(WHITE, ROOK, 1) not in board2.rooks_early


def test_shield_pawn_moves_counted_after_castle():
    board = board_from_fen("4k3/5ppp/8/8/8/8/5PPP/4K2R w K - 0 1")
    board = _play(board, "O-O", "e8d8", "g2g4", "d8e8", "h2h3")
    assert board.shield_moves[WHITE] == 2
    assert board.shield_moves[BLACK] == 0


def test_queen_sortie_before_minors_is_flagged():
    board = _play(initial_board(), "e2e4", "e7e5", "d1h5")
    assert board.queen_early[WHITE]
    board2 = _play(initial_board(), "g1f3", "g8f6", "b1c3", "b8c6", "d2d3",
                   "d7d6", "d1d2")
    assert not board2.queen_early[WHITE]


def test_apply_rejects_illegal_move():
    board = initial_board()
    piece = board.placement[parse_square("e2")]
    bogus = Move(piece, parse_square("e2"), parse_square("e5"), NORMAL)
    with pytest.raises(IllegalMoveError):
        board.apply(bogus)


def test_move_text_round_trip():
    board = initial_board()
    for move in board.legal_moves():
        assert parse_move(board, format_move(move)) == move


def test_castle_text_forms():
    board = board_from_fen("4k3/8/8/8/8/8/8/R3K2R w KQ - 0 1")
    assert parse_move(board, "O-O").kind == CASTLE_SHORT
    assert parse_move(board, "0-0-0").kind == CASTLE_LONG
    assert format_move(parse_move(board, "O-O")) == "O-O"


def test_promotion_text_round_trip():
    board = board_from_fen("8/P3k3/8/8/8/8/4K3/8 w - - 0 1")
    move = parse_move(board, "a7a8n")
    assert move.promotion == KNIGHT
    assert format_move(move) == "a7a8n"
    assert parse_move(board, "a7a8").promotion == QUEEN


def test_parse_errors():
    board = initial_board()
    with pytest.raises(ParseError):
        parse_move(board, "zz9x")
    with pytest.raises(IllegalMoveError):
        parse_move(board, "e2e5")
    with pytest.raises(ParseError):
        board_from_fen("not a fen")
    with pytest.raises(ParseError):
        board_from_fen("8/8/8/8/8/8/8/8 w - - 0 1")  # kings missing


def test_fen_reserialization_stable():
    board = _play(initial_board(), "e2e4", "c7c5", "g1f3")
    fen = to_fen(board)
    again = board_from_fen(fen)
    assert to_fen(again) == fen
    assert [p >> 7 if p != -1 else None for p in again.placement] \
        == [p >> 7 if p != -1 else None for p in board.placement]


def test_fen_extension_round_trips_counters():
    board = board_from_fen("4k3/5ppp/8/8/8/8/5PPP/4K2R w K - 0 1")
    board = _play(board, "O-O", "e8d8", "g2g4")
    fen = to_fen(board)
    loaded = board_from_fen(fen)
    assert loaded.shield_moves == board.shield_moves
    assert loaded.has_castled == board.has_castled
    assert loaded.king_moved == board.king_moved
    assert "ext:" in fen


def test_plain_fen_defaults_counters_to_zero():
    board = board_from_fen(START_FEN)
    assert board.shield_moves == (0, 0)
    assert board.has_castled == (0, 0)
    assert not board.king_moved[WHITE]


def test_history_and_parent_chain():
    board = _play(initial_board(), "e2e4", "e7e5", "g1f3")
    hist = board.history()
    assert len(hist) == 3 == board.ply
    assert [format_move(m) for m, _ in hist] == ["e2e4", "e7e5", "g1f3"]
    assert board.parent.parent.parent.ply == 0
    assert to_fen(board.parent.parent.parent) == to_fen(initial_board())


def test_start_fen_reproduces_initial_identities():
    a, b = initial_board(), board_from_fen(START_FEN)
    assert a.piece_sq == b.piece_sq
    assert a.hash == b.hash


def test_capture_records_identity():
    board = _play(initial_board(), "e2e4", "d7d5", "e4d5")
    captured = [p for p in board.captured]
    assert len(captured) == 1
    assert piece_kind(captured[0]) == PAWN
    assert captured[0] >> 7 == BLACK


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=1, max_value=40))
def test_random_playouts_stay_consistent_with_oracle(seed, plies):
    rng = random.Random(seed)
    board = initial_board()
    for _ in range(plies):
        moves = board.legal_moves()
        if not moves or board.detect_termination().outcome != ONGOING:
            break
        board = board.apply_unchecked(rng.choice(moves))
    assert production_moves(board) == oracle_moves(board)
    kings = [p for p in board.piece_sq if piece_kind(p) == KING]
    assert len(kings) == 2
    assert not board.in_check(1 - board.side)


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_fen_round_trip_preserves_move_set(seed):
    rng = random.Random(seed)
    board = initial_board()
    for _ in range(rng.randrange(0, 30)):
        moves = board.legal_moves()
        if not moves:
            break
        board = board.apply_unchecked(rng.choice(moves))
    loaded = board_from_fen(to_fen(board))
    assert {(m.from_sq, m.to_sq, m.kind, m.promotion) for m in loaded.legal_moves()} \
        == {(m.from_sq, m.to_sq, m.kind, m.promotion) for m in board.legal_moves()}


def test_legal_moves_sorted_and_cached():
    board = initial_board()
    first = board.legal_moves()
    assert first is board.legal_moves()
    keys = [(m.from_sq, m.to_sq, m.kind) for m in first]
    assert keys == sorted(keys)
