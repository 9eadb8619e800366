"""Static evaluation tests.

Golden values are frozen by hand from the score tables before the
implementation ran; derivations are spelled out next to each constant.
"""

import pytest
from hypothesis import given, settings, strategies as st

from coevo_chess.board import (
    BLACK,
    WHITE,
    parse_square,
    BISHOP,
    KNIGHT,
    PAWN,
    QUEEN,
    ROOK,
    KING,
    board_from_fen,
    initial_board,
    make_piece,
    parse_move,
    piece_kind,
    to_fen,
)
from coevo_chess.evaluation import (
    PlayoutCache,
    STAGE_BEGINNING,
    STAGE_END,
    ScoreBreakdown,
    ap_score,
    evaluate_board,
    evaluate_mixed,
    game_stage,
    mobility_count,
    mobility_score,
    mp_score,
    proximity_score,
    rp_score,
)
from coevo_chess.genome import encode_move, parse_gene, random_gene
from coevo_chess.tables import ap_value, default_tables

T = default_tables()


def play(board, *texts):
    for t in texts:
        board = board.apply(parse_move(board, t))
    return board


def fen(s):
    return board_from_fen(s)


def at(board, sq_name):
    return board.placement[parse_square(sq_name)]


# ---- stage ----

def test_stage_initial_beginning():
    assert game_stage(initial_board()) == STAGE_BEGINNING


def test_stage_six_minors_still_beginning():
    # one knight removed per side: 6 minors, "less than 6" is strict
    b = fen("rnbqkb1r/pppppppp/8/8/8/8/PPPPPPPP/R1BQKBNR w KQkq - 0 1")
    assert game_stage(b) == STAGE_BEGINNING


def test_stage_five_minors_end():
    b = fen("rnbqkb1r/pppppppp/8/8/8/8/PPPPPPPP/R1BQKB1R w KQkq - 0 1")
    assert game_stage(b) == STAGE_END


def test_stage_monotone_over_playouts():
    import random
    rng = random.Random(909)
    for _ in range(8):
        b = initial_board()
        seen_end = False
        for _ in range(60):
            if not b.has_any_legal_move():
                break
            b = b.apply(rng.choice(b.legal_moves()))
            s = game_stage(b)
            if s == STAGE_END:
                seen_end = True
            elif seen_end:
                pytest.fail("stage reverted from end to beginning")


# ---- mobility ----

def test_rook_mobility_zero():
    # rook boxed in at a1 by own pawns: 0 destinations -> -4
    b = fen("4k3/8/8/8/8/8/P7/RP2K3 w - - 0 1")
    rook = make_piece(WHITE, ROOK, 1)
    assert mobility_count(b, rook) == 0
    assert mobility_score(b, rook) == -4


def test_rook_mobility_open_board_clamped():
    # lone rook on d4 sees 14 squares, table tops out at 12 -> 6
    b = fen("4k3/8/8/8/3R4/8/8/4K3 w - - 0 1")
    rook = make_piece(WHITE, ROOK, 1)
    assert mobility_count(b, rook) == 14
    assert mobility_score(b, rook) == 6


def test_knight_mobility_eight_empty():
    b = fen("4k3/8/8/8/3N4/8/8/4K3 w - - 0 1")
    knight = make_piece(WHITE, KNIGHT, 1)
    assert mobility_count(b, knight) == 8
    assert mobility_score(b, knight) == 7


def test_knight_mobility_counts_empty_squares_only():
    # enemy pawn on e6 removes one target even though it could be captured
    b = fen("4k3/8/4p3/8/3N4/8/8/4K3 w - - 0 1")
    knight = make_piece(WHITE, KNIGHT, 1)
    assert mobility_count(b, knight) == 7
    assert mobility_score(b, knight) == 6


def test_bishop_mobility_thirteen():
    # bishop on d5, open board: 3+3+4+3 = 13 -> 6
    b = fen("4k3/8/8/3B4/8/8/8/4K3 w - - 0 1")
    bishop = make_piece(WHITE, BISHOP, 1)
    assert mobility_count(b, bishop) == 13
    assert mobility_score(b, bishop) == 6


def test_slider_capture_square_counts_but_king_does_not():
    # rook a1 vs enemy pawn a3: a2 empty + pawn square = 2 up the file,
    # b1,c1,d1 then own king stops = 3 along the rank
    b = fen("4k3/8/8/8/8/p7/8/R3K3 w - - 0 1")
    rook = make_piece(WHITE, ROOK, 1)
    assert mobility_count(b, rook) == 5
    # the enemy king on the same ray is not a destination
    b2 = fen("8/8/8/8/8/k7/8/R3K3 w - - 0 1")
    assert mobility_count(b2, rook) == 4  # a2 only on the file


def test_queen_mobility_stage_dependent():
    # queen a1 boxed in: count 0; begin table -8, end table -12
    begin = fen("2b1kb2/8/8/8/8/nnn5/PP6/QB2K3 w - - 0 1")
    end = fen("4k3/8/8/8/8/nnn5/PP6/QB2K3 w - - 0 1")
    assert game_stage(begin) == STAGE_BEGINNING
    assert game_stage(end) == STAGE_END
    queen = make_piece(WHITE, QUEEN, 1)
    assert mobility_count(begin, queen) == 0
    assert mobility_score(begin, queen) == -8
    assert mobility_score(end, queen) == -12


def test_queen_mobility_open_end_stage():
    # queens and kings only; white queen d1 reaches 7+3+4+3 = 17 -> 18
    b = fen("3qk3/8/8/8/8/8/8/3QK3 w - - 0 1")
    queen = make_piece(WHITE, QUEEN, 1)
    assert game_stage(b) == STAGE_END
    assert mobility_count(b, queen) == 17
    assert mobility_score(b, queen) == 18


def test_mobility_rejects_pawn_and_king():
    b = initial_board()
    with pytest.raises(ValueError):
        mobility_score(b, make_piece(WHITE, PAWN, 1))
    with pytest.raises(ValueError):
        mobility_count(b, make_piece(WHITE, KING, 1))


# ---- proximity ----

def test_rook_proximity_one_row_two_cols_is_24():
    # the worked example: 14 (distance 1) + 10 (distance 2)
    b = fen("8/8/5k2/3R4/8/8/8/4K3 w - - 0 1")
    assert proximity_score(b, make_piece(WHITE, ROOK, 1)) == 24


def test_rook_proximity_shared_file_counts_one_axis():
    # rook d1 vs king d8: row distance 7 -> 0, col distance 0 -> 0
    b = fen("3k4/8/8/8/8/8/8/3R1K2 w - - 0 1")
    assert proximity_score(b, make_piece(WHITE, ROOK, 1)) == 0


def test_knight_proximity_manhattan_one():
    # knight e7, king e8: distance 1 -> 12
    b = fen("4k3/4N3/8/8/8/8/8/4K3 w - - 0 1")
    assert proximity_score(b, make_piece(WHITE, KNIGHT, 1)) == 12


def test_queen_proximity_manhattan_fourteen():
    b = fen("7k/8/8/8/8/8/8/Q3K3 w - - 0 1")
    assert proximity_score(b, make_piece(WHITE, QUEEN, 1)) == 0


def test_queen_proximity_close():
    # queen d5 vs king e8: 3 + 1 = 4 -> 15
    b = fen("4k3/8/8/3Q4/8/8/8/4K3 w - - 0 1")
    assert proximity_score(b, make_piece(WHITE, QUEEN, 1)) == 15


def test_proximity_rejects_bishop():
    b = initial_board()
    with pytest.raises(ValueError):
        proximity_score(b, make_piece(WHITE, BISHOP, 1))


# ---- absolute position ----

def test_ap_rook_and_queen_zero_everywhere():
    for fen_s in ("4k3/8/8/3R4/8/8/8/4K3 w - - 0 1",
                  "4k3/8/8/3Q4/8/8/8/4K3 w - - 0 1",
                  "4k3/2q5/8/8/8/8/2r5/4K3 b - - 0 1"):
        b = fen(fen_s)
        for p in b.piece_sq:
            if piece_kind(p) in (ROOK, QUEEN):
                assert ap_score(b, p) == 0


def test_ap_initial_knight():
    b = initial_board()
    assert ap_score(b, make_piece(WHITE, KNIGHT, 1)) == -5  # b1
    assert ap_score(b, make_piece(BLACK, KNIGHT, 1)) == -5  # b8 mirrors


def test_ap_castled_pawn_matrix_selected():
    b = play(initial_board(),
             "e2e4", "e7e5", "g1f3", "b8c6", "f1c4", "g8f6", "e1g1")
    assert b.has_castled[WHITE] == 1
    f2 = make_piece(WHITE, PAWN, 6)
    g2 = make_piece(WHITE, PAWN, 7)
    # kingside castle selects the right-shield matrix: begin value + 10
    assert ap_score(b, f2) == ap_value(T.pawn_ap_begin, WHITE, b.piece_sq[f2]) + 10
    assert ap_score(b, g2) == ap_value(T.pawn_ap_begin, WHITE, b.piece_sq[g2]) + 10
    # black has not castled: plain beginning matrix
    f7 = make_piece(BLACK, PAWN, 6)
    assert ap_score(b, f7) == ap_value(T.pawn_ap_begin, BLACK, b.piece_sq[f7])


def test_ap_end_stage_king_matrix():
    b = fen("8/8/8/8/3K4/8/8/7k w - - 0 1")
    king = make_piece(WHITE, KING, 1)
    assert game_stage(b) == STAGE_END
    assert ap_score(b, king) == ap_value(T.king_ap_end, WHITE, b.piece_sq[king])
    assert ap_score(b, king) == 2 * ap_value(T.knight_ap, WHITE, b.piece_sq[king])


# ---- relative position: pawns ----

def test_rp_doubled_back_pawn():
    # black pawns c7 (back) and c5, white pawn c2.
    # c7: doubled -7, isolated -3 -> -10; c5: isolated -3 only.
    # c2: isolated -3 (enemy pawns ahead kill the passed bonus).
    b = fen("4k3/2p5/8/2p5/8/8/2P5/4K3 b - - 0 1")
    assert rp_score(b, at(b, "c7")) == -10
    assert rp_score(b, at(b, "c5")) == -3
    assert rp_score(b, at(b, "c2")) == -3


def test_rp_protected_linked_passed_pawns():
    # black pawns b5 and c6, no white pawns.
    # b5: protected +3, open file -10, passed +15, linked +10 = 18
    # c6: open file -10, passed +15, linked +10 = 15
    b = fen("4k3/8/2p5/1p6/8/8/8/4K3 b - - 0 1")
    assert rp_score(b, at(b, "b5")) == 18
    assert rp_score(b, at(b, "c6")) == 15


def test_rp_passed_pawn_blocked():
    # white d5 pawn: isolated -3, open file -10, passed +15 = 2 baseline,
    # minus 7 with an enemy knight directly in front, 3 for a bishop
    knight = fen("4k3/8/3n4/3P4/8/8/8/4K3 w - - 0 1")
    bishop = fen("4k3/8/3b4/3P4/8/8/8/4K3 w - - 0 1")
    clear = fen("4k3/8/8/3P4/8/8/8/4K3 w - - 0 1")
    assert rp_score(clear, at(clear, "d5")) == 2
    assert rp_score(knight, at(knight, "d5")) == 2 - 7
    assert rp_score(bishop, at(bishop, "d5")) == 2 - 3


# ---- relative position: rooks ----

def test_rp_two_rooks_on_seventh_worth_40():
    # enemy pawns on the rook files and knight blockers keep every other
    # rook bonus silent, isolating the rank term: 20 + 20
    b = fen("4k3/R6R/8/8/n6n/8/p6p/4K3 w - - 0 1")
    r1 = make_piece(WHITE, ROOK, 1)
    r2 = make_piece(WHITE, ROOK, 2)
    assert rp_score(b, r1) == 20
    assert rp_score(b, r2) == 20
    assert rp_score(b, r1) + rp_score(b, r2) == 40


def test_rp_black_rook_second_rank():
    b = fen("4k3/8/8/8/n7/8/r6P/4K3 b - - 0 1")
    # rank 2 is black's seventh; menace fires on the h2 pawn along the rank
    assert rp_score(b, make_piece(BLACK, ROOK, 1)) == 20 + 3 + 4


def test_rp_doubled_rooks_and_open_file():
    # rooks a1+a7, no pawns anywhere: each gets doubled +15 and open +4,
    # a7 adds the seventh-rank 20
    b = fen("4k3/R7/8/8/8/8/8/R3K3 w - - 0 1")
    assert rp_score(b, make_piece(WHITE, ROOK, 1)) == 19
    assert rp_score(b, make_piece(WHITE, ROOK, 2)) == 39


def test_rp_rook_menaces_pawn():
    b = fen("4k3/4p3/8/8/4R3/8/8/4K3 w - - 0 1")
    # menace +3; file holds an enemy pawn so no +4
    assert rp_score(b, make_piece(WHITE, ROOK, 1)) == 3


def test_rp_rook_early_move_penalty():
    b = play(initial_board(), "h2h4", "a7a6", "h1h3", "b7b6")
    kings_rook = make_piece(WHITE, ROOK, 2)
    assert kings_rook in b.rooks_early
    # h3: no other bonus applies, leaving the kingside forfeit alone
    assert rp_score(b, kings_rook) == -12
    b2 = play(initial_board(), "a2a4", "a7a6", "a1a3", "b7b6")
    queens_rook = make_piece(WHITE, ROOK, 1)
    assert rp_score(b2, queens_rook) == -8


# ---- relative position: knights, bishops, queens ----

def test_rp_knight_protected_near_king():
    # knight e5 protected by d4+f4 pawns, enemy king 3 away: +6
    b = fen("4k3/8/8/4N3/3P1P2/8/8/4K3 w - - 0 1")
    assert rp_score(b, make_piece(WHITE, KNIGHT, 1)) == 6


def test_rp_knight_protection_needs_close_king():
    # same shield but the king is 10 away: no bonus
    b = fen("7k/8/8/8/1N6/P1P5/8/4K3 w - - 0 1")
    assert rp_score(b, make_piece(WHITE, KNIGHT, 1)) == 0


def test_rp_bishop_pair_counted_once():
    # two bishops, one adjacent diagonal pawn (c3): pair 20 - pawn 3
    b = fen("4k3/8/8/8/8/2p5/1B6/2B1K3 w - - 0 1")
    scores = [rp_score(b, p) for p in b.piece_sq
              if piece_kind(p) == BISHOP and p >> 7 == WHITE]
    assert sum(scores) == 17
    assert sorted(scores) in ([-3, 20], [0, 17])


def test_rp_single_bishop_no_pair():
    b = fen("4k3/8/8/8/8/2p5/1B6/4K3 w - - 0 1")
    assert rp_score(b, make_piece(WHITE, BISHOP, 1)) == -3


def test_rp_queen_diagonal_bishop_and_free_file():
    # bishop g4 shares the d1 diagonal (+9), d-file has no pawns (+6)
    b = fen("4k3/8/8/8/6B1/8/8/3QK3 w - - 0 1")
    assert rp_score(b, make_piece(WHITE, QUEEN, 1)) == 15


def test_rp_queen_early_development():
    b = play(initial_board(), "d2d4", "e7e5", "d1d3")
    assert b.queen_early[WHITE]
    # diag bishop f1 +9, early -9, own pawn on file kills the +6
    assert rp_score(b, make_piece(WHITE, QUEEN, 1)) == 0


# ---- relative position: kings ----

def test_rp_king_castled_and_surrounded():
    b = play(initial_board(),
             "e2e4", "e7e5", "g1f3", "b8c6", "f1c4", "g8f6", "e1g1")
    # castled +30; f1 rook, f2/g2/h2 pawns surround: +40
    assert rp_score(b, make_piece(WHITE, KING, 1)) == 70


def test_rp_king_moved_without_castling():
    b = play(initial_board(), "e2e4", "e7e5", "e1e2")
    # -30 for the wasted first move; d1 queen counts 3 in the surround,
    # f1 bishop and d2/f2 pawns 1 each: +60
    assert rp_score(b, make_piece(WHITE, KING, 1)) == 30


def test_rp_king_stalemated_exact():
    b = fen("7k/5Q2/6K1/8/8/8/8/8 b - - 0 1")
    assert not b.has_any_legal_move()
    assert rp_score(b, make_piece(BLACK, KING, 1)) == -10000


def test_rp_king_full_block_defeat_value():
    b = fen("4k3/8/8/8/1p6/pPp5/PRP5/KB6 w - - 0 1")
    assert not b.has_any_legal_move()
    # -10000 plus a2 pawn, b2 rook, b1 bishop around the king: +30
    assert rp_score(b, make_piece(WHITE, KING, 1)) == -9970


def test_rp_checkmated_total_dominates():
    b = play(initial_board(), "f2f3", "e7e5", "g2g4", "d8h4")
    assert evaluate_board(b, WHITE).total < -9000
    assert evaluate_board(b, BLACK).total > 9000


# ---- menace-protection ----

def test_mp_worked_example_minus_900():
    # black knight lands on e5; white N+B+Q attack it, black B+Q defend.
    # Sequence -300 +300 -320 +320 -900 = -900 for black.
    b = fen("1k2q3/3n4/3b4/8/8/2B2N2/4Q3/6K1 b - - 0 1")
    b = b.apply(parse_move(b, "d7e5"))
    knight = b.placement[b.last_move.to_sq]
    assert piece_kind(knight) == KNIGHT
    assert mp_score(b, knight) == -900
    assert evaluate_board(b, BLACK).mp == -900
    assert evaluate_board(b, WHITE).mp == 900


def test_mp_unattacked_piece_zero():
    b = fen("4k3/8/8/3Q4/8/8/8/4K3 w - - 0 1")
    assert mp_score(b, make_piece(WHITE, QUEEN, 1)) == 0


@pytest.mark.parametrize("fen_s,kind,expected", [
    # single attacker, no defender: owner loses the piece outright
    ("7k/8/2p5/3Q4/8/8/8/7K w - - 0 1", QUEEN, -900),   # c6 pawn takes queen
    ("7k/8/8/3R4/1n6/8/8/7K w - - 0 1", ROOK, -500),    # b4 knight takes rook
    ("7k/8/8/3N4/8/1b6/8/7K w - - 0 1", KNIGHT, -300),  # b3 bishop via c4
    ("7k/8/8/3B3K/8/8/8/3r4 w - - 0 1", BISHOP, -320),  # d1 rook up the file
    ("7k/8/8/3P4/8/8/q7/7K w - - 0 1", PAWN, -100),     # a2 queen via b3-c4
])
def test_mp_single_attacker_no_defender(fen_s, kind, expected):
    b = fen(fen_s)
    target = make_piece(WHITE, kind, 1)
    assert mp_score(b, target) == expected


def test_mp_defended_pawn_attacked_by_queen_zero():
    # taking the pawn loses the queen to the recapture: attacker declines
    b = fen("7k/8/8/2p5/3p4/8/8/3Q3K w - - 0 1")
    assert mp_score(b, at(b, "d4")) == 0


def test_mp_light_attacker_heavy_recapture_still_loses():
    # black pawn takes the rook, queen recaptures the pawn: -500 + 100
    b = fen("7k/8/2p5/3R4/8/8/8/3Q3K w - - 0 1")
    assert mp_score(b, make_piece(WHITE, ROOK, 1)) == -400


def test_mp_king_may_recapture_when_unanswered():
    # lone queen eyes a pawn defended only by its king: exchange declined
    b = fen("8/8/4k3/3p4/8/8/8/3Q3K b - - 0 1")
    assert mp_score(b, at(b, "d5")) == 0


def test_mp_king_recapture_blocked_by_second_attacker():
    # rook takes, the king may not recapture into the queen's attack
    b = fen("8/8/4k3/3p3R/8/8/8/3Q3K b - - 0 1")
    assert mp_score(b, at(b, "d5")) == -100


def test_mp_king_never_captures_defended_piece():
    b = fen("7k/8/4p3/3p4/4K3/8/8/8 w - - 0 1")
    assert mp_score(b, at(b, "d5")) == 0
    b2 = fen("7k/8/8/3p4/4K3/8/8/8 w - - 0 1")
    assert mp_score(b2, at(b2, "d5")) == -100


# ---- evaluate_board composition ----

def test_initial_position_balanced():
    bd = evaluate_board(initial_board(), WHITE)
    assert bd.total == 0
    assert all(v == 0 for v in bd.nets().values())


def test_material_component_missing_queen():
    b = fen("rnb1kbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1")
    bd = evaluate_board(b, WHITE)
    own, opp = bd.material
    assert own - opp == 900


def test_antisymmetry_without_last_move():
    for s in ("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1",
              "4k3/8/8/3q4/8/8/8/3QK3 w - - 0 1",
              "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1"):
        b = fen(s)
        assert b.last_move is None
        assert evaluate_board(b, WHITE).mp == 0
        assert evaluate_board(b, WHITE).total == -evaluate_board(b, BLACK).total


@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 40))
@settings(max_examples=40, deadline=None)
def test_antisymmetry_random_positions(seed, plies):
    import random
    rng = random.Random(seed)
    b = initial_board()
    for _ in range(plies):
        if not b.has_any_legal_move():
            break
        b = b.apply(rng.choice(b.legal_moves()))
    w, blk = evaluate_board(b, WHITE), evaluate_board(b, BLACK)
    assert w.total == -blk.total
    assert w.mp == -blk.mp
    assert w.material == tuple(reversed(blk.material))


def _mirror_fen(fen_s):
    body, side, castle, ep, half, full = fen_s.split()[:6]
    ranks = body.split("/")
    flipped = "/".join(r.swapcase() for r in reversed(ranks))
    side = "b" if side == "w" else "w"
    castle = castle.swapcase() if castle != "-" else "-"
    if ep != "-":
        ep = ep[0] + str(9 - int(ep[1]))
    return " ".join([flipped, side, castle, ep, half, full])


def test_color_mirror_negates_total():
    for s in ("rnbqkbnr/pppppppp/8/8/4P3/8/PPPP1PPP/RNBQKBNR b KQkq - 0 1",
              "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1",
              "4k3/2p5/8/2p5/8/8/2P5/4K3 b - - 0 1",
              "1k2q3/3n4/3b4/8/8/2B2N2/4Q3/6K1 b - - 0 1"):
        b = fen(s)
        m = fen(_mirror_fen(s))
        assert evaluate_board(b, WHITE).total == evaluate_board(m, BLACK).total
        assert evaluate_board(b, BLACK).total == evaluate_board(m, WHITE).total


def test_evaluate_board_pure_and_stable():
    b = fen("r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1")
    first = evaluate_board(b, WHITE)
    again = evaluate_board(b, WHITE)
    fresh = evaluate_board(fen(to_fen(b)), WHITE)
    assert first == again == fresh
    assert repr(first) == repr(again)


def test_breakdown_total_matches_nets():
    b = play(initial_board(), "e2e4", "d7d5", "e4d5")
    bd = evaluate_board(b, WHITE)
    assert bd.total == sum(bd.nets().values())
    d = bd.as_dict()
    assert set(d) == {"perspective", "material", "ap", "rp", "mobility",
                      "proximity", "mp", "total"}


def test_breakdown_after_pass_turn_has_no_mp():
    b = play(initial_board(), "e2e4").pass_turn()
    assert evaluate_board(b, WHITE).mp == 0


# ---- evaluate_mixed ----

def _invalid_gene(color):
    # first knight, direction (-2,-1): off the board from b1/b8, and
    # undecodable anywhere the knight is gone
    return parse_gene((1, 0, 1, 0, 1, 0, 1), 0, color)


def test_mixed_hanging_queen_capture_value():
    # Qd1xd5 then a skipped black gene.  After the capture, for White:
    # material +900, rp -3 (pawn-free file +6, early queen move -9),
    # mobility 18 (count 27, end stage), proximity 15 (distance 4),
    # ap 0, mp 0 -> 930; minus the 50 skip penalty = 880.
    b = fen("4k3/8/8/3q4/8/8/8/3QK3 w - - 0 1")
    capture = encode_move(parse_move(b, "d1d5"))
    genes = [capture, _invalid_gene(BLACK)]
    assert evaluate_mixed(genes, b) == 880
    assert evaluate_mixed(genes, b, mode="last_move") == 880


def test_mixed_all_skips():
    b = fen("4k3/8/8/8/8/8/8/4K3 w - - 0 1")
    genes = [_invalid_gene(WHITE), _invalid_gene(BLACK), _invalid_gene(WHITE)]
    assert evaluate_mixed(genes, b) == -150
    assert evaluate_mixed(genes, b, mode="last_move") == -150


def test_mixed_mate_dominates_with_padding():
    # back-rank mate in one; remaining slots carry the terminal value
    b = fen("6k1/5ppp/8/8/8/8/8/4R1K1 w - - 0 1")
    mate = b.apply(parse_move(b, "e1e8"))
    assert not mate.has_any_legal_move()
    final = evaluate_board(mate, WHITE).total
    genes = [encode_move(parse_move(b, "e1e8")),
             _invalid_gene(BLACK), _invalid_gene(WHITE), _invalid_gene(BLACK)]
    fitness = evaluate_mixed(genes, b)
    assert fitness == 4 * final
    assert fitness >= 10000
    assert evaluate_mixed(genes, b, mode="last_move") == final


def test_mixed_terminal_at_root():
    b = fen("7k/5Q2/6K1/8/8/8/8/8 b - - 0 1")
    total = evaluate_board(b, BLACK).total
    genes = [_invalid_gene(BLACK), _invalid_gene(WHITE)]
    assert total <= -10000
    assert evaluate_mixed(genes, b) == 2 * total
    assert evaluate_mixed(genes, b, mode="last_move") == total


def test_mixed_symmetric_shuffle_near_zero():
    b = initial_board()
    genes = []
    cur = b
    for text in ("g1f3", "g8f6", "f3g1", "f6g8"):
        mv = parse_move(cur, text)
        genes.append(encode_move(mv))
        cur = cur.apply(mv)
    fitness = evaluate_mixed(genes, b)
    assert abs(fitness) <= 60


def test_mixed_rejects_unknown_mode():
    with pytest.raises(ValueError):
        evaluate_mixed([], initial_board(), mode="average")


def test_mixed_skip_keeps_alternation():
    # white's first gene is junk, second white gene still plays a white move
    b = initial_board()
    e4 = encode_move(parse_move(b, "e2e4"))
    after_pass = b.pass_turn().pass_turn()
    # same gene still decodes after two null plies
    genes = [_invalid_gene(WHITE), _invalid_gene(BLACK), e4, _invalid_gene(BLACK)]
    got = evaluate_mixed(genes, b)
    expected = evaluate_board(after_pass.apply(parse_move(after_pass, "e2e4")),
                              WHITE).total - 150
    assert got == expected


@given(st.integers(0, 2**32 - 1), st.integers(0, 12))
@settings(max_examples=40, deadline=None)
def test_mixed_cache_is_pure_optimization(seed, prefix_plies):
    import random as _random

    rng = _random.Random(seed)
    board = initial_board()
    for _ in range(prefix_plies):
        moves = board.legal_moves()
        if not moves:
            break
        board = board.apply(rng.choice(moves))
    side = board.side
    genes = [random_gene(side if i % 2 == 0 else 1 - side, rng) for i in range(6)]
    for mode in ("sum", "last_move"):
        plain = evaluate_mixed(genes, board, mode=mode)
        cached = evaluate_mixed(genes, board, mode=mode, cache=PlayoutCache())
        assert plain == cached
