"""Chess rules core.

Board state, move generation, legality, termination detection and the
text formats (FEN with an extension suffix for the scoring counters,
coordinate move text).  Boards are immutable after construction: applying
a move returns a fresh Board that keeps a reference to its predecessor,
so the full game history is always reachable through ``parent``.

Squares are ints 0..63 (``rank * 8 + file``), pieces are packed ints that
keep their identity (color, kind, ordinal) for the whole game.  The
ordinal distinguishes same-kind pieces: pawns 1..8 by starting file,
rook/knight/bishop 1..2 queenside first, and pieces created by promotion
get the next free ordinal of their kind.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

WHITE, BLACK = 0, 1

PAWN, ROOK, KNIGHT, BISHOP, QUEEN, KING = 0, 1, 2, 3, 4, 5

KIND_NAMES = ("pawn", "rook", "knight", "bishop", "queen", "king")
KIND_LETTERS = "PRNBQK"
ROSTER_SIZES = (8, 2, 2, 2, 1, 1)

EMPTY = -1

# move kinds
NORMAL, CAPTURE, EN_PASSANT, CASTLE_SHORT, CASTLE_LONG, PROMOTION = range(6)

ONGOING = "ongoing"
CHECKMATE = "checkmate"
TECHNICAL_TIE = "technical_tie"
STALEMATE_DEFEAT = "stalemate_defeat"
FULL_BLOCK_DEFEAT = "full_block_defeat"


class IllegalMoveError(ValueError):
    pass


class ParseError(ValueError):
    pass


def make_piece(color: int, kind: int, ordinal: int) -> int:
    """Pack a piece identity; ordinal is 1-based."""
    return (color << 7) | (kind << 4) | (ordinal - 1)


def piece_color(piece: int) -> int:
    return piece >> 7


def piece_kind(piece: int) -> int:
    return (piece >> 4) & 7


def piece_ordinal(piece: int) -> int:
    return (piece & 15) + 1


@dataclass(frozen=True)
class PieceId:
    color: int
    kind: int
    ordinal: int


def unpack_piece(piece: int) -> PieceId:
    return PieceId(piece_color(piece), piece_kind(piece), piece_ordinal(piece))


def square(file: int, rank: int) -> int:
    return rank * 8 + file


def sq_file(sq: int) -> int:
    return sq & 7


def sq_rank(sq: int) -> int:
    return sq >> 3


def square_name(sq: int) -> str:
    return "abcdefgh"[sq & 7] + "12345678"[sq >> 3]


def parse_square(text: str) -> int:
    if len(text) != 2 or text[0] not in "abcdefgh" or text[1] not in "12345678":
        raise ParseError(f"bad square {text!r}")
    return ("12345678".index(text[1])) * 8 + "abcdefgh".index(text[0])


@dataclass(frozen=True, slots=True)
class Move:
    piece: int
    from_sq: int
    to_sq: int
    kind: int
    promotion: int | None = None

    def __str__(self) -> str:
        return format_move(self)


@dataclass(frozen=True)
class Termination:
    outcome: str
    winner: int | None = None
    loser: int | None = None


# ---- precomputed geometry ----

# compass directions as (dfile, drank); N, NE, E, SE, S, SW, W, NW
DIRS8 = ((0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1))
ORTHO_DIRS = (0, 2, 4, 6)
DIAG_DIRS = (1, 3, 5, 7)

KNIGHT_JUMPS = ((1, 2), (2, 1), (2, -1), (1, -2), (-1, -2), (-2, -1), (-2, 1), (-1, 2))


def _build_rays():
    rays = []
    for sq in range(64):
        f, r = sq & 7, sq >> 3
        per_dir = []
        for df, dr in DIRS8:
            line = []
            nf, nr = f + df, r + dr
            while 0 <= nf < 8 and 0 <= nr < 8:
                line.append(nr * 8 + nf)
                nf += df
                nr += dr
            per_dir.append(tuple(line))
        rays.append(tuple(per_dir))
    return tuple(rays)


def _build_steps(deltas):
    table = []
    for sq in range(64):
        f, r = sq & 7, sq >> 3
        targets = []
        for df, dr in deltas:
            nf, nr = f + df, r + dr
            if 0 <= nf < 8 and 0 <= nr < 8:
                targets.append(nr * 8 + nf)
        table.append(tuple(targets))
    return tuple(table)


def _build_pawn_attack_from():
    # PAWN_ATTACK_FROM[color][sq] = squares a pawn of that color attacks sq from
    table = [[[] for _ in range(64)] for _ in range(2)]
    for sq in range(64):
        f, r = sq & 7, sq >> 3
        for color, fwd in ((WHITE, 1), (BLACK, -1)):
            for df in (-1, 1):
                nf, nr = f + df, r - fwd
                if 0 <= nf < 8 and 0 <= nr < 8:
                    table[color][sq].append(nr * 8 + nf)
    return tuple(tuple(tuple(x) for x in side) for side in table)


RAYS = _build_rays()
KNIGHT_STEPS = _build_steps(KNIGHT_JUMPS)
KING_STEPS = _build_steps(DIRS8)
PAWN_ATTACK_FROM = _build_pawn_attack_from()

_zrng = random.Random(0x5EED5)
PIECE_KEYS = tuple(tuple(_zrng.getrandbits(64) for _ in range(64)) for _ in range(256))
CASTLE_KEYS = tuple(_zrng.getrandbits(64) for _ in range(16))
EP_KEYS = tuple(_zrng.getrandbits(64) for _ in range(8))
SIDE_KEY = _zrng.getrandbits(64)

# castling right bits
WK, WQ, BK, BQ = 1, 2, 4, 8

_CASTLE_CLEAR_BY_SQ = {0: WQ, 7: WK, 4: WK | WQ, 56: BQ, 63: BK, 60: BK | BQ}

SHIELD_FILES_SHORT = (5, 6, 7)
SHIELD_FILES_LONG = (0, 1, 2)

START_FEN = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1"


class Board:
    __slots__ = (
        "placement", "side", "castling", "ep_square", "piece_sq", "captured",
        "hash", "ply", "halfmove", "parent", "last_move", "king_moved",
        "has_castled", "shield_moves", "queen_moved", "queen_early",
        "minors_moved", "rooks_early",
        "_legal", "_legal_set", "_has_legal", "_checks", "_pins",
    )

    def __init__(self, placement, side, castling, ep_square, piece_sq, captured,
                 hash_, ply, parent, last_move, king_moved, has_castled,
                 shield_moves, queen_moved, queen_early, minors_moved, rooks_early,
                 halfmove=0):
        self.placement = placement
        self.side = side
        self.castling = castling
        self.ep_square = ep_square
        self.piece_sq = piece_sq
        self.captured = captured
        self.hash = hash_
        self.ply = ply
        self.halfmove = halfmove
        self.parent = parent
        self.last_move = last_move
        self.king_moved = king_moved
        self.has_castled = has_castled        # 0 none, 1 short, 2 long
        self.shield_moves = shield_moves
        self.queen_moved = queen_moved
        self.queen_early = queen_early
        self.minors_moved = minors_moved
        self.rooks_early = rooks_early
        self._legal = None
        self._legal_set = None
        self._has_legal = None
        self._checks = [None, None]
        self._pins = None

    # ---- queries ----

    def king_square(self, color: int) -> int:
        return self.piece_sq[make_piece(color, KING, 1)]

    def in_check(self, color: int | None = None) -> bool:
        if color is None:
            color = self.side
        cached = self._checks[color]
        if cached is None:
            cached = self.is_attacked(self.king_square(color), 1 - color)
            self._checks[color] = cached
        return cached

    def is_attacked(self, sq: int, by: int) -> bool:
        placement = self.placement
        for src in PAWN_ATTACK_FROM[by][sq]:
            p = placement[src]
            if p != EMPTY and p >> 7 == by and (p >> 4) & 7 == PAWN:
                return True
        for src in KNIGHT_STEPS[sq]:
            p = placement[src]
            if p != EMPTY and p >> 7 == by and (p >> 4) & 7 == KNIGHT:
                return True
        for src in KING_STEPS[sq]:
            p = placement[src]
            if p != EMPTY and p >> 7 == by and (p >> 4) & 7 == KING:
                return True
        rays = RAYS[sq]
        for d in ORTHO_DIRS:
            for t in rays[d]:
                p = placement[t]
                if p != EMPTY:
                    if p >> 7 == by and (p >> 4) & 7 in (ROOK, QUEEN):
                        return True
                    break
        for d in DIAG_DIRS:
            for t in rays[d]:
                p = placement[t]
                if p != EMPTY:
                    if p >> 7 == by and (p >> 4) & 7 in (BISHOP, QUEEN):
                        return True
                    break
        return False

    def attackers_of(self, sq: int, by: int) -> list[int]:
        """Pieces of `by` attacking sq directly (no x-rays)."""
        placement = self.placement
        found = []
        for src in PAWN_ATTACK_FROM[by][sq]:
            p = placement[src]
            if p != EMPTY and p >> 7 == by and (p >> 4) & 7 == PAWN:
                found.append(p)
        for src in KNIGHT_STEPS[sq]:
            p = placement[src]
            if p != EMPTY and p >> 7 == by and (p >> 4) & 7 == KNIGHT:
                found.append(p)
        for src in KING_STEPS[sq]:
            p = placement[src]
            if p != EMPTY and p >> 7 == by and (p >> 4) & 7 == KING:
                found.append(p)
        rays = RAYS[sq]
        for d in ORTHO_DIRS:
            for t in rays[d]:
                p = placement[t]
                if p != EMPTY:
                    if p >> 7 == by and (p >> 4) & 7 in (ROOK, QUEEN):
                        found.append(p)
                    break
        for d in DIAG_DIRS:
            for t in rays[d]:
                p = placement[t]
                if p != EMPTY:
                    if p >> 7 == by and (p >> 4) & 7 in (BISHOP, QUEEN):
                        found.append(p)
                    break
        return found

    # ---- move generation ----

    def _pseudo_moves(self, color):
        placement = self.placement
        fwd = 8 if color == WHITE else -8
        home_rank = 1 if color == WHITE else 6
        promo_rank = 7 if color == WHITE else 0
        for piece, sq in list(self.piece_sq.items()):
            if piece >> 7 != color:
                continue
            kind = (piece >> 4) & 7
            if kind == PAWN:
                to = sq + fwd
                if placement[to] == EMPTY:
                    if to >> 3 == promo_rank:
                        for pk in (QUEEN, ROOK, BISHOP, KNIGHT):
                            yield Move(piece, sq, to, PROMOTION, pk)
                    else:
                        yield Move(piece, sq, to, NORMAL)
                    if sq >> 3 == home_rank and placement[sq + 2 * fwd] == EMPTY:
                        yield Move(piece, sq, sq + 2 * fwd, NORMAL)
                f = sq & 7
                for df in (-1, 1):
                    nf = f + df
                    if not 0 <= nf < 8:
                        continue
                    to = sq + fwd + df
                    tgt = placement[to]
                    if tgt != EMPTY and tgt >> 7 != color and (tgt >> 4) & 7 != KING:
                        if to >> 3 == promo_rank:
                            for pk in (QUEEN, ROOK, BISHOP, KNIGHT):
                                yield Move(piece, sq, to, PROMOTION, pk)
                        else:
                            yield Move(piece, sq, to, CAPTURE)
                    elif to == self.ep_square:
                        yield Move(piece, sq, to, EN_PASSANT)
            elif kind == KNIGHT:
                for to in KNIGHT_STEPS[sq]:
                    tgt = placement[to]
                    if tgt == EMPTY:
                        yield Move(piece, sq, to, NORMAL)
                    elif tgt >> 7 != color and (tgt >> 4) & 7 != KING:
                        yield Move(piece, sq, to, CAPTURE)
            elif kind == KING:
                for to in KING_STEPS[sq]:
                    tgt = placement[to]
                    if tgt == EMPTY:
                        yield Move(piece, sq, to, NORMAL)
                    elif tgt >> 7 != color and (tgt >> 4) & 7 != KING:
                        yield Move(piece, sq, to, CAPTURE)
                yield from self._castle_moves(color, piece, sq)
            else:
                dirs = ORTHO_DIRS if kind == ROOK else DIAG_DIRS if kind == BISHOP else range(8)
                rays = RAYS[sq]
                for d in dirs:
                    for to in rays[d]:
                        tgt = placement[to]
                        if tgt == EMPTY:
                            yield Move(piece, sq, to, NORMAL)
                            continue
                        if tgt >> 7 != color and (tgt >> 4) & 7 != KING:
                            yield Move(piece, sq, to, CAPTURE)
                        break

    def _castle_moves(self, color, piece, sq):
        if self.in_check(color):
            return
        placement = self.placement
        if color == WHITE:
            if sq == 4:
                if self.castling & WK and placement[5] == EMPTY and placement[6] == EMPTY \
                        and not self.is_attacked(5, BLACK) and not self.is_attacked(6, BLACK):
                    yield Move(piece, 4, 6, CASTLE_SHORT)
                if self.castling & WQ and placement[3] == EMPTY and placement[2] == EMPTY \
                        and placement[1] == EMPTY \
                        and not self.is_attacked(3, BLACK) and not self.is_attacked(2, BLACK):
                    yield Move(piece, 4, 2, CASTLE_LONG)
        else:
            if sq == 60:
                if self.castling & BK and placement[61] == EMPTY and placement[62] == EMPTY \
                        and not self.is_attacked(61, WHITE) and not self.is_attacked(62, WHITE):
                    yield Move(piece, 60, 62, CASTLE_SHORT)
                if self.castling & BQ and placement[59] == EMPTY and placement[58] == EMPTY \
                        and placement[57] == EMPTY \
                        and not self.is_attacked(59, WHITE) and not self.is_attacked(58, WHITE):
                    yield Move(piece, 60, 58, CASTLE_LONG)

    def _compute_pins(self):
        """Map pinned square -> frozenset of allowed target squares."""
        pins = {}
        color = self.side
        ksq = self.king_square(color)
        placement = self.placement
        for d in range(8):
            ray = RAYS[ksq][d]
            blocker = None
            path = []
            for t in ray:
                p = placement[t]
                path.append(t)
                if p == EMPTY:
                    continue
                if p >> 7 == color:
                    if blocker is None:
                        blocker = t
                        continue
                    break
                kinds = (ROOK, QUEEN) if d in ORTHO_DIRS else (BISHOP, QUEEN)
                if blocker is not None and (p >> 4) & 7 in kinds:
                    pins[blocker] = frozenset(path) - {blocker}
                break
        return pins

    def _move_is_safe(self, move: Move) -> bool:
        """Would this pseudo-legal move leave the mover's king attacked?"""
        color = move.piece >> 7
        kind = (move.piece >> 4) & 7
        if kind != KING and move.kind != EN_PASSANT and not self.in_check(color) \
                and color == self.side:
            if self._pins is None:
                self._pins = self._compute_pins()
            allowed = self._pins.get(move.from_sq)
            if allowed is None:
                return True
            return move.to_sq in allowed
        placement = list(self.placement)
        placement[move.from_sq] = EMPTY
        if move.kind == EN_PASSANT:
            placement[move.to_sq + (-8 if color == WHITE else 8)] = EMPTY
        elif move.kind == CASTLE_SHORT or move.kind == CASTLE_LONG:
            # transit squares already verified attack-free during generation
            pass
        placement[move.to_sq] = move.piece
        ksq = move.to_sq if kind == KING else self.king_square(color)
        return not _attacked_on(placement, ksq, 1 - color)

    def legal_moves(self) -> tuple[Move, ...]:
        if self._legal is None:
            moves = [m for m in self._pseudo_moves(self.side) if self._move_is_safe(m)]
            moves.sort(key=lambda m: (m.from_sq, m.to_sq, m.kind,
                                      -1 if m.promotion is None else m.promotion))
            self._legal = tuple(moves)
            self._has_legal = bool(moves)
        return self._legal

    def legal_move_set(self) -> frozenset:
        if self._legal_set is None:
            self._legal_set = frozenset(self.legal_moves())
        return self._legal_set

    def has_any_legal_move(self) -> bool:
        if self._has_legal is None:
            if self._legal is not None:
                self._has_legal = bool(self._legal)
            else:
                self._has_legal = False
                for m in self._pseudo_moves(self.side):
                    if self._move_is_safe(m):
                        self._has_legal = True
                        break
        return self._has_legal

    def is_legal(self, move: Move) -> bool:
        if self._legal_set is not None or self._legal is not None:
            return move in self.legal_move_set()
        if self.placement[move.from_sq] != move.piece or move.piece >> 7 != self.side:
            return False
        for m in self._pseudo_moves_from(move.from_sq):
            if m == move:
                return self._move_is_safe(move)
        return False

    def _pseudo_moves_from(self, sq):
        piece = self.placement[sq]
        for m in self._pseudo_moves(self.side):
            if m.from_sq == sq:
                yield m

    # ---- applying moves ----

    def apply(self, move: Move) -> "Board":
        if not self.is_legal(move):
            raise IllegalMoveError(f"illegal move {format_move(move)}")
        return self.apply_unchecked(move)

    def apply_unchecked(self, move: Move) -> "Board":
        color = move.piece >> 7
        kind = (move.piece >> 4) & 7
        placement = list(self.placement)
        piece_sq = dict(self.piece_sq)
        captured = self.captured
        h = self.hash
        castling = self.castling
        ep_square = -1
        king_moved = self.king_moved
        has_castled = self.has_castled
        shield_moves = self.shield_moves
        queen_moved = self.queen_moved
        queen_early = self.queen_early
        minors_moved = self.minors_moved
        rooks_early = self.rooks_early

        victim = placement[move.to_sq]
        if move.kind == EN_PASSANT:
            vsq = move.to_sq + (-8 if color == WHITE else 8)
            victim = placement[vsq]
            placement[vsq] = EMPTY
            h ^= PIECE_KEYS[victim][vsq]
            del piece_sq[victim]
            captured = captured | {victim}
        elif victim != EMPTY:
            h ^= PIECE_KEYS[victim][move.to_sq]
            del piece_sq[victim]
            captured = captured | {victim}
            bit = _CASTLE_CLEAR_BY_SQ.get(move.to_sq)
            if bit:
                castling &= ~bit

        placement[move.from_sq] = EMPTY
        h ^= PIECE_KEYS[move.piece][move.from_sq]
        mover = move.piece
        if move.kind == PROMOTION:
            promo_kind = move.promotion if move.promotion is not None else QUEEN
            mover = self._next_promo_piece(color, promo_kind, piece_sq, captured)
            del piece_sq[move.piece]
        placement[move.to_sq] = mover
        piece_sq[mover] = move.to_sq
        h ^= PIECE_KEYS[mover][move.to_sq]

        if move.kind == CASTLE_SHORT or move.kind == CASTLE_LONG:
            back = 0 if color == WHITE else 56
            if move.kind == CASTLE_SHORT:
                rfrom, rto = back + 7, back + 5
            else:
                rfrom, rto = back, back + 3
            rook = placement[rfrom]
            placement[rfrom] = EMPTY
            placement[rto] = rook
            piece_sq[rook] = rto
            h ^= PIECE_KEYS[rook][rfrom] ^ PIECE_KEYS[rook][rto]
            has_castled = _set_at(has_castled, color, 1 if move.kind == CASTLE_SHORT else 2)
            king_moved = _set_at(king_moved, color, True)
        elif kind == KING:
            king_moved = _set_at(king_moved, color, True)
        elif kind == ROOK:
            bit = _CASTLE_CLEAR_BY_SQ.get(move.from_sq)
            if bit and self.castling & bit and not self.king_moved[color] \
                    and self.has_castled[color] == 0:
                rooks_early = rooks_early | {move.piece}
        elif kind == PAWN:
            if abs(move.to_sq - move.from_sq) == 16:
                ep_square = (move.from_sq + move.to_sq) // 2
            if self.has_castled[color] and (move.from_sq & 7) in self._shield_files(color):
                shield_moves = _set_at(shield_moves, color, shield_moves[color] + 1)
        elif kind == QUEEN and piece_ordinal(move.piece) == 1 and not queen_moved[color]:
            queen_moved = _set_at(queen_moved, color, True)
            if len(minors_moved[color]) < 2:
                queen_early = _set_at(queen_early, color, True)
        if kind in (KNIGHT, BISHOP) and move.piece not in minors_moved[color]:
            minors_moved = _set_at(minors_moved, color, minors_moved[color] | {move.piece})

        bit = _CASTLE_CLEAR_BY_SQ.get(move.from_sq)
        if bit:
            castling &= ~bit

        if castling != self.castling:
            h ^= CASTLE_KEYS[self.castling] ^ CASTLE_KEYS[castling]
        if self.ep_square != -1:
            h ^= EP_KEYS[self.ep_square & 7]
        if ep_square != -1:
            h ^= EP_KEYS[ep_square & 7]
        h ^= SIDE_KEY

        halfmove = 0 if kind == PAWN or victim != EMPTY else self.halfmove + 1
        return Board(placement, 1 - self.side, castling, ep_square, piece_sq,
                     captured, h, self.ply + 1, self, move, king_moved, has_castled,
                     shield_moves, queen_moved, queen_early, minors_moved,
                     rooks_early, halfmove)

    def _shield_files(self, color):
        return SHIELD_FILES_SHORT if self.has_castled[color] == 1 else SHIELD_FILES_LONG

    def shield_files(self, color):
        """Files watched for shield-pawn moves; empty when not castled."""
        if self.has_castled[color] == 0:
            return ()
        return self._shield_files(color)

    @staticmethod
    def _next_promo_piece(color, kind, piece_sq, captured):
        used = 0
        for p in piece_sq:
            if p >> 7 == color and (p >> 4) & 7 == kind:
                used = max(used, piece_ordinal(p))
        for p in captured:
            if p >> 7 == color and (p >> 4) & 7 == kind:
                used = max(used, piece_ordinal(p))
        return make_piece(color, kind, used + 1)

    def pass_turn(self) -> "Board":
        """Null ply used by chromosome playouts; never a legal game move."""
        h = self.hash ^ SIDE_KEY
        if self.ep_square != -1:
            h ^= EP_KEYS[self.ep_square & 7]
        return Board(self.placement, 1 - self.side, self.castling, -1,
                     self.piece_sq, self.captured, h, self.ply + 1, self, None,
                     self.king_moved, self.has_castled, self.shield_moves,
                     self.queen_moved, self.queen_early, self.minors_moved,
                     self.rooks_early, self.halfmove + 1)

    # ---- termination ----

    def is_technical_tie(self) -> bool:
        kinds = {WHITE: [], BLACK: []}
        for p in self.piece_sq:
            k = (p >> 4) & 7
            if k == KING:
                continue
            if k in (PAWN, ROOK, QUEEN):
                return False
            kinds[p >> 7].append(k)
        if len(kinds[WHITE]) + len(kinds[BLACK]) > 2:
            return False
        w, b = sorted(kinds[WHITE]), sorted(kinds[BLACK])
        lo, hi = sorted((w, b))
        if (lo, hi) in (([], []), ([], [KNIGHT]), ([], [BISHOP]),
                        ([BISHOP], [BISHOP]), ([KNIGHT], [BISHOP]),
                        ([], [KNIGHT, KNIGHT])):
            return True
        return self._repeated_last_moves()

    def _repeated_last_moves(self) -> bool:
        # both players repeated their last move three times: over the last
        # 6 plies each side moved the same piece by the same displacement
        if self.ply < 6:
            return False
        node = self
        seen = []
        for _ in range(6):
            mv = node.last_move
            if mv is None or node.parent is None:
                return False
            seen.append((mv.piece,
                         (mv.to_sq & 7) - (mv.from_sq & 7),
                         (mv.to_sq >> 3) - (mv.from_sq >> 3),
                         mv.kind))
            node = node.parent
        return seen[0] == seen[2] == seen[4] and seen[1] == seen[3] == seen[5]

    def detect_termination(self, fide_stalemate: bool = False) -> Termination:
        if not self.has_any_legal_move():
            if self.in_check(self.side):
                return Termination(CHECKMATE, winner=1 - self.side, loser=self.side)
            if fide_stalemate:
                return Termination(TECHNICAL_TIE)
            if not any(True for _ in self._pseudo_moves(self.side)):
                return Termination(FULL_BLOCK_DEFEAT, winner=1 - self.side, loser=self.side)
            return Termination(STALEMATE_DEFEAT, winner=1 - self.side, loser=self.side)
        if self.is_technical_tie():
            return Termination(TECHNICAL_TIE)
        return Termination(ONGOING)

    # ---- history ----

    def history(self) -> list[tuple[Move | None, int]]:
        out = []
        node = self
        while node.parent is not None:
            out.append((node.last_move, node.hash))
            node = node.parent
        out.reverse()
        return out

    def __repr__(self):
        return f"<Board ply={self.ply} side={'wb'[self.side]} {to_fen(self).split(' ext:')[0]}>"


def _attacked_on(placement, sq, by):
    """Attack test on a bare placement list (used by safety simulation)."""
    for src in PAWN_ATTACK_FROM[by][sq]:
        p = placement[src]
        if p != EMPTY and p >> 7 == by and (p >> 4) & 7 == PAWN:
            return True
    for src in KNIGHT_STEPS[sq]:
        p = placement[src]
        if p != EMPTY and p >> 7 == by and (p >> 4) & 7 == KNIGHT:
            return True
    for src in KING_STEPS[sq]:
        p = placement[src]
        if p != EMPTY and p >> 7 == by and (p >> 4) & 7 == KING:
            return True
    rays = RAYS[sq]
    for d in ORTHO_DIRS:
        for t in rays[d]:
            p = placement[t]
            if p != EMPTY:
                if p >> 7 == by and (p >> 4) & 7 in (ROOK, QUEEN):
                    return True
                break
    for d in DIAG_DIRS:
        for t in rays[d]:
            p = placement[t]
            if p != EMPTY:
                if p >> 7 == by and (p >> 4) & 7 in (BISHOP, QUEEN):
                    return True
                break
    return False


def _set_at(pair, idx, value):
    return (value, pair[1]) if idx == 0 else (pair[0], value)


def _initial_hash(placement, side, castling, ep_square):
    h = 0
    for sq, p in enumerate(placement):
        if p != EMPTY:
            h ^= PIECE_KEYS[p][sq]
    h ^= CASTLE_KEYS[castling]
    if ep_square != -1:
        h ^= EP_KEYS[ep_square & 7]
    if side == BLACK:
        h ^= SIDE_KEY
    return h


def initial_board() -> Board:
    return board_from_fen(START_FEN)


def full_roster(color: int) -> list[int]:
    roster = []
    for kind, n in enumerate(ROSTER_SIZES):
        for o in range(1, n + 1):
            roster.append(make_piece(color, kind, o))
    return roster


# ---- FEN ----

_LETTER_TO_KIND = {c: k for k, c in enumerate(KIND_LETTERS)}


def to_fen(board: Board, include_ext: bool = True) -> str:
    rows = []
    for rank in range(7, -1, -1):
        row = ""
        run = 0
        for file in range(8):
            p = board.placement[rank * 8 + file]
            if p == EMPTY:
                run += 1
                continue
            if run:
                row += str(run)
                run = 0
            letter = KIND_LETTERS[(p >> 4) & 7]
            row += letter if p >> 7 == WHITE else letter.lower()
        if run:
            row += str(run)
        rows.append(row)
    castle = ""
    for bit, c in ((WK, "K"), (WQ, "Q"), (BK, "k"), (BQ, "q")):
        if board.castling & bit:
            castle += c
    parts = [
        "/".join(rows),
        "wb"[board.side],
        castle or "-",
        square_name(board.ep_square) if board.ep_square != -1 else "-",
        str(board.halfmove),
        str(board.ply // 2 + 1),
    ]
    if include_ext:
        parts.append("ext:" + _ext_token(board))
    return " ".join(parts)


def _piece_token(p: int) -> str:
    return KIND_LETTERS[(p >> 4) & 7].lower() + str(piece_ordinal(p))


def _ext_token(board: Board) -> str:
    def flag(pair):
        return f"{int(pair[0])}/{int(pair[1])}"

    castled = "/".join("-sl"[board.has_castled[c]] for c in (WHITE, BLACK))
    minors = "/".join(
        ",".join(sorted(_piece_token(p) for p in board.minors_moved[c])) or "-"
        for c in (WHITE, BLACK))
    erooks = "/".join(
        ",".join(sorted(_piece_token(p) for p in board.rooks_early if p >> 7 == c)) or "-"
        for c in (WHITE, BLACK))
    return (f"shield={board.shield_moves[0]}/{board.shield_moves[1]};"
            f"castled={castled};kmoved={flag(board.king_moved)};"
            f"qmoved={flag(board.queen_moved)};qearly={flag(board.queen_early)};"
            f"minors={minors};erooks={erooks}")


def _parse_piece_token(token: str, color: int) -> int:
    kind = _LETTER_TO_KIND[token[0].upper()]
    return make_piece(color, kind, int(token[1:]))


def board_from_fen(fen: str) -> Board:
    fields = fen.split()
    if len(fields) < 4:
        raise ParseError(f"FEN needs at least 4 fields: {fen!r}")
    placement = [EMPTY] * 64
    piece_sq = {}
    counts = {}
    rows = fields[0].split("/")
    if len(rows) != 8:
        raise ParseError("FEN placement needs 8 ranks")
    # scan a1..h8 so ordinals are assigned in board order
    for rank in range(8):
        row = rows[7 - rank]
        file = 0
        for ch in row:
            if ch.isdigit():
                file += int(ch)
                continue
            if file >= 8:
                raise ParseError(f"rank overflow in {row!r}")
            color = WHITE if ch.isupper() else BLACK
            kind = _LETTER_TO_KIND.get(ch.upper())
            if kind is None:
                raise ParseError(f"bad piece letter {ch!r}")
            counts[(color, kind)] = counts.get((color, kind), 0) + 1
            piece = make_piece(color, kind, counts[(color, kind)])
            sq = rank * 8 + file
            placement[sq] = piece
            piece_sq[piece] = sq
            file += 1
        if file != 8:
            raise ParseError(f"rank underflow in {row!r}")
    for color in (WHITE, BLACK):
        if counts.get((color, KING), 0) != 1:
            raise ParseError("each side needs exactly one king")
    side = {"w": WHITE, "b": BLACK}.get(fields[1])
    if side is None:
        raise ParseError(f"bad side {fields[1]!r}")
    castling = 0
    if fields[2] != "-":
        for ch in fields[2]:
            castling |= {"K": WK, "Q": WQ, "k": BK, "q": BQ}.get(ch, 0)
    # drop rights whose king/rook are displaced
    if placement[4] == EMPTY or (placement[4] >> 4) & 7 != KING or placement[4] >> 7 != WHITE:
        castling &= ~(WK | WQ)
    if placement[60] == EMPTY or (placement[60] >> 4) & 7 != KING or placement[60] >> 7 != BLACK:
        castling &= ~(BK | BQ)
    for sqr, bit, color in ((7, WK, WHITE), (0, WQ, WHITE), (63, BK, BLACK), (56, BQ, BLACK)):
        p = placement[sqr]
        if p == EMPTY or (p >> 4) & 7 != ROOK or p >> 7 != color:
            castling &= ~bit
    ep_square = -1 if len(fields) < 4 or fields[3] == "-" else parse_square(fields[3])
    captured = frozenset(
        p for color in (WHITE, BLACK) for p in full_roster(color) if p not in piece_sq)

    halfmove = 0
    fullmove = 1
    if len(fields) > 4 and fields[4].isdigit():
        halfmove = int(fields[4])
    if len(fields) > 5 and fields[5].isdigit():
        fullmove = max(1, int(fields[5]))
    ply = (fullmove - 1) * 2 + (1 if side == BLACK else 0)

    king_moved = (False, False)
    has_castled = (0, 0)
    shield_moves = (0, 0)
    queen_moved = (False, False)
    queen_early = (False, False)
    minors_moved = (frozenset(), frozenset())
    rooks_early = frozenset()
    for field in fields[4:]:
        if not field.startswith("ext:"):
            continue
        for item in field[4:].split(";"):
            key, _, val = item.partition("=")
            w, _, b = val.partition("/")
            if key == "shield":
                shield_moves = (int(w), int(b))
            elif key == "castled":
                has_castled = ("-sl".index(w), "-sl".index(b))
            elif key == "kmoved":
                king_moved = (bool(int(w)), bool(int(b)))
            elif key == "qmoved":
                queen_moved = (bool(int(w)), bool(int(b)))
            elif key == "qearly":
                queen_early = (bool(int(w)), bool(int(b)))
            elif key == "minors":
                minors_moved = tuple(
                    frozenset(_parse_piece_token(t, c) for t in v.split(",") if t != "-")
                    for c, v in ((WHITE, w), (BLACK, b)))
            elif key == "erooks":
                rooks_early = frozenset(
                    _parse_piece_token(t, c)
                    for c, v in ((WHITE, w), (BLACK, b))
                    for t in v.split(",") if t != "-")
    h = _initial_hash(placement, side, castling, ep_square)
    return Board(placement, side, castling, ep_square, piece_sq, captured, h, ply,
                 None, None, king_moved, has_castled, shield_moves, queen_moved,
                 queen_early, minors_moved, rooks_early, halfmove)


# ---- move text ----

def format_move(move: Move) -> str:
    if move.kind == CASTLE_SHORT:
        return "O-O"
    if move.kind == CASTLE_LONG:
        return "O-O-O"
    text = square_name(move.from_sq) + square_name(move.to_sq)
    if move.kind == PROMOTION and move.promotion is not None:
        text += KIND_LETTERS[move.promotion].lower()
    return text


def parse_move(board: Board, text: str) -> Move:
    """Resolve coordinate move text against the board's legal moves."""
    text = text.strip()
    upper = text.upper().replace("0", "O")
    if upper in ("O-O", "O-O-O"):
        want = CASTLE_SHORT if upper == "O-O" else CASTLE_LONG
        for m in board.legal_moves():
            if m.kind == want:
                return m
        raise IllegalMoveError(f"{text} is not legal here")
    if len(text) not in (4, 5):
        raise ParseError(f"bad move text {text!r}")
    from_sq = parse_square(text[:2])
    to_sq = parse_square(text[2:4])
    promo = None
    if len(text) == 5:
        kind = _LETTER_TO_KIND.get(text[4].upper())
        if kind is None or kind in (PAWN, KING):
            raise ParseError(f"bad promotion letter {text[4]!r}")
        promo = kind
    matches = [m for m in board.legal_moves()
               if m.from_sq == from_sq and m.to_sq == to_sq
               and (m.promotion == promo or (promo is None and m.promotion is None))]
    if not matches:
        # promotion written without a suffix defaults to queen
        if promo is None:
            matches = [m for m in board.legal_moves()
                       if m.from_sq == from_sq and m.to_sq == to_sq
                       and m.promotion == QUEEN]
        if not matches:
            raise IllegalMoveError(f"{text} is not legal here")
    return matches[0]


# ---- module-level op aliases ----

def legal_moves(board: Board) -> tuple[Move, ...]:
    return board.legal_moves()


def apply_move(board: Board, move: Move) -> Board:
    return board.apply(move)


def in_check(board: Board, color: int | None = None) -> bool:
    return board.in_check(color)


def detect_termination(board: Board, fide_stalemate: bool = False) -> Termination:
    return board.detect_termination(fide_stalemate)


def is_technical_tie(board: Board) -> bool:
    return board.is_technical_tie()
