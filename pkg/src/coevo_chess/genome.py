"""Binary move-sequence genome: genes, chromosomes, variation, repair.

A chromosome is a flat bitstring. Genes are parsed out of it left to
right: 4 bits of piece code, then a direction field whose width depends
on the piece kind, then a 3-bit displacement for the ray pieces. The
bitstring is the source of truth; variation operators work on raw bits
and the repair function restores structure afterwards.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .board import (
    WHITE, PAWN, ROOK, KNIGHT, BISHOP, QUEEN, KING,
    NORMAL, CAPTURE, EN_PASSANT, CASTLE_SHORT, CASTLE_LONG, PROMOTION,
    EMPTY, Board, Move, make_piece, sq_file, sq_rank,
)

__all__ = [
    "Gene", "Chromosome", "VariationConfig",
    "NoLegalMoveError", "LengthMismatchError",
    "PIECE_BY_CODE", "CODE_BY_PIECE", "direction_width", "gene_bit_length",
    "parse_genes", "random_gene", "random_chromosome",
    "decode", "encode_move", "is_encodable", "repair", "uniform_crossover", "mutate",
    "debug_string",
]


class NoLegalMoveError(Exception):
    """The position offers no legal move for the chromosome's first gene."""


class LengthMismatchError(ValueError):
    pass


# 4-bit piece code -> (kind, ordinal); pawn codes follow the printed
# Gray-style enumeration rather than binary order
PIECE_BY_CODE = {
    0b0000: (PAWN, 1), 0b0001: (PAWN, 2), 0b0011: (PAWN, 3), 0b0010: (PAWN, 4),
    0b0110: (PAWN, 5), 0b0111: (PAWN, 6), 0b0101: (PAWN, 7), 0b0100: (PAWN, 8),
    0b1000: (ROOK, 1), 0b1001: (ROOK, 2),
    0b1010: (KNIGHT, 1), 0b1011: (KNIGHT, 2),
    0b1100: (BISHOP, 1), 0b1101: (BISHOP, 2),
    0b1110: (QUEEN, 1), 0b1111: (KING, 1),
}
CODE_BY_PIECE = {v: k for k, v in PIECE_BY_CODE.items()}

_DIR_WIDTH = {PAWN: 2, ROOK: 2, BISHOP: 2, KNIGHT: 3, QUEEN: 3, KING: 4}
_HAS_DISPLACEMENT = (ROOK, BISHOP, QUEEN)

# compass deltas as (dfile, drank), clockwise from north
_COMPASS = ((0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1))
_ROOK_DIRS = (_COMPASS[0], _COMPASS[2], _COMPASS[4], _COMPASS[6])
_BISHOP_DIRS = (_COMPASS[1], _COMPASS[3], _COMPASS[5], _COMPASS[7])
_KNIGHT_DIRS = ((1, 2), (2, 1), (2, -1), (1, -2), (-1, -2), (-2, -1), (-2, 1), (-1, 2))
KING_CASTLE_SHORT_DIR = 8
KING_CASTLE_LONG_DIR = 9
KING_DIRECTION_COUNT = 10


def direction_width(kind: int) -> int:
    return _DIR_WIDTH[kind]


def gene_bit_length(kind: int) -> int:
    return 4 + _DIR_WIDTH[kind] + (3 if kind in _HAS_DISPLACEMENT else 0)


@dataclass(frozen=True, slots=True)
class Gene:
    """One parsed gene; raw field values plus the bit slice they came from."""

    color: int
    code: int
    kind: int
    ordinal: int
    dir_raw: int
    disp_raw: int | None
    bits: tuple

    @property
    def direction(self) -> int:
        if self.kind == KING:
            return self.dir_raw % KING_DIRECTION_COUNT
        return self.dir_raw

    @property
    def displacement(self) -> int:
        if self.disp_raw is None:
            return 1
        return (self.disp_raw % 7) + 1

    @property
    def piece(self) -> int:
        return make_piece(self.color, self.kind, self.ordinal)


@dataclass(frozen=True, slots=True)
class Chromosome:
    bits: tuple
    color: int
    gene_count: int

    @property
    def bit_length(self) -> int:
        return len(self.bits)


@dataclass(frozen=True)
class VariationConfig:
    crossover_prob: float = 0.7
    uniform_level: float = 0.2
    mutation_prob_per_bit: float = 0.04
    inversion_enabled: bool = False

    def __post_init__(self):
        for name in ("crossover_prob", "uniform_level", "mutation_prob_per_bit"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0,1], got {v}")


def _bits_to_int(bits) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | b
    return out


def _int_to_bits(value: int, width: int) -> tuple:
    return tuple((value >> (width - 1 - i)) & 1 for i in range(width))


def _make_gene(color: int, code: int, dir_raw: int, disp_raw: int | None) -> Gene:
    kind, ordinal = PIECE_BY_CODE[code]
    bits = _int_to_bits(code, 4) + _int_to_bits(dir_raw, _DIR_WIDTH[kind])
    if kind in _HAS_DISPLACEMENT:
        bits += _int_to_bits(disp_raw, 3)
    else:
        disp_raw = None
    return Gene(color, code, kind, ordinal, dir_raw, disp_raw, bits)


def parse_gene(bits, offset: int, color: int) -> Gene | None:
    """Parse one gene starting at offset; None when the bits run short."""
    if offset + 4 > len(bits):
        return None
    code = _bits_to_int(bits[offset:offset + 4])
    kind, ordinal = PIECE_BY_CODE[code]
    width = _DIR_WIDTH[kind]
    end = offset + 4 + width
    if kind in _HAS_DISPLACEMENT:
        end += 3
    if end > len(bits):
        return None
    dir_raw = _bits_to_int(bits[offset + 4:offset + 4 + width])
    disp_raw = _bits_to_int(bits[offset + 4 + width:end]) if kind in _HAS_DISPLACEMENT else None
    return Gene(color, code, kind, ordinal, dir_raw, disp_raw, tuple(bits[offset:end]))


def parse_genes(chromosome: Chromosome) -> list[Gene]:
    """Parse up to gene_count genes; stops early when bits run out."""
    out = []
    offset = 0
    while len(out) < chromosome.gene_count:
        gene = parse_gene(chromosome.bits, offset, chromosome.color)
        if gene is None:
            break
        out.append(gene)
        offset += len(gene.bits)
    return out


def random_gene(color: int, rng: random.Random) -> Gene:
    code = rng.getrandbits(4)
    kind, _ = PIECE_BY_CODE[code]
    dir_raw = rng.getrandbits(_DIR_WIDTH[kind])
    disp_raw = rng.getrandbits(3) if kind in _HAS_DISPLACEMENT else None
    return _make_gene(color, code, dir_raw, disp_raw)


def random_chromosome(color: int, gene_count: int, rng: random.Random) -> Chromosome:
    bits = ()
    for _ in range(gene_count):
        bits += random_gene(color, rng).bits
    return Chromosome(bits, color, gene_count)


def decode(gene: Gene, board: Board) -> Move | None:
    """Gene -> Move on this board, or None when invalid.

    Invalid covers: the piece is captured, the target is off the board
    or geometrically impossible, and moves that are illegal here. The
    returned move is always a member of board.legal_moves().
    """
    piece = gene.piece
    sq = board.piece_sq.get(piece)
    if sq is None:
        return None
    f, r = sq & 7, sq >> 3
    color = gene.color
    kind = gene.kind

    if kind == PAWN:
        fwd = 1 if color == WHITE else -1
        d = gene.direction
        if d == 0:
            nf, nr = f, r + fwd
        elif d == 3:
            nf, nr = f, r + 2 * fwd
        else:
            # capture-left/right from the mover's seat
            side_step = -1 if color == WHITE else 1
            nf = f + (side_step if d == 1 else -side_step)
            nr = r + fwd
        if not (0 <= nf < 8 and 0 <= nr < 8):
            return None
        to = nr * 8 + nf
        promo_rank = 7 if color == WHITE else 0
        if d in (1, 2) and to == board.ep_square:
            move = Move(piece, sq, to, EN_PASSANT)
        elif nr == promo_rank:
            move = Move(piece, sq, to, PROMOTION, QUEEN)
        elif d in (1, 2):
            move = Move(piece, sq, to, CAPTURE)
        else:
            move = Move(piece, sq, to, NORMAL)
    elif kind == KING and gene.direction >= 8:
        back = 0 if color == WHITE else 56
        if gene.direction == KING_CASTLE_SHORT_DIR:
            move = Move(piece, back + 4, back + 6, CASTLE_SHORT)
        else:
            move = Move(piece, back + 4, back + 2, CASTLE_LONG)
        if sq != back + 4:
            return None
    else:
        if kind == KNIGHT:
            df, dr = _KNIGHT_DIRS[gene.direction]
            steps = 1
        elif kind == KING:
            df, dr = _COMPASS[gene.direction]
            steps = 1
        elif kind == ROOK:
            df, dr = _ROOK_DIRS[gene.direction]
            steps = gene.displacement
        elif kind == BISHOP:
            df, dr = _BISHOP_DIRS[gene.direction]
            steps = gene.displacement
        else:
            df, dr = _COMPASS[gene.direction]
            steps = gene.displacement
        nf, nr = f + df * steps, r + dr * steps
        if not (0 <= nf < 8 and 0 <= nr < 8):
            return None
        to = nr * 8 + nf
        target = board.placement[to]
        move = Move(piece, sq, to, NORMAL if target == EMPTY else CAPTURE)

    return move if move in board.legal_move_set() else None


def is_encodable(move: Move) -> bool:
    """Whether the mover is one of the sixteen roster-coded pieces.

    Pieces created by promotion get fresh ordinals, so they fall outside
    the 4-bit code space: chromosomes can never command them.
    """
    piece = move.piece
    return ((piece >> 4) & 7, (piece & 15) + 1) in CODE_BY_PIECE


def encode_move(move: Move) -> Gene:
    """Inverse of decode for any legal move of a roster piece; promotions
    encode as the pawn step and decode back with the automatic queen
    choice. Moves of surplus promoted pieces raise ValueError."""
    piece = move.piece
    color = piece >> 7
    kind = (piece >> 4) & 7
    ordinal = (piece & 15) + 1
    code = CODE_BY_PIECE.get((kind, ordinal))
    if code is None:
        raise ValueError("piece outside the 16-code roster cannot be encoded")
    f0, r0 = sq_file(move.from_sq), sq_rank(move.from_sq)
    f1, r1 = sq_file(move.to_sq), sq_rank(move.to_sq)
    df, dr = f1 - f0, r1 - r0

    if move.kind == CASTLE_SHORT:
        return _make_gene(color, code, KING_CASTLE_SHORT_DIR, None)
    if move.kind == CASTLE_LONG:
        return _make_gene(color, code, KING_CASTLE_LONG_DIR, None)
    if kind == PAWN:
        if df == 0:
            dir_raw = 3 if abs(dr) == 2 else 0
        else:
            side_step = -1 if color == WHITE else 1
            dir_raw = 1 if df == side_step else 2
        return _make_gene(color, code, dir_raw, None)
    if kind == KNIGHT:
        return _make_gene(color, code, _KNIGHT_DIRS.index((df, dr)), None)
    if kind == KING:
        return _make_gene(color, code, _COMPASS.index((df, dr)), None)
    steps = max(abs(df), abs(dr))
    unit = (df // steps if df else 0, dr // steps if dr else 0)
    dirs = _ROOK_DIRS if kind == ROOK else _BISHOP_DIRS if kind == BISHOP else _COMPASS
    return _make_gene(color, code, dirs.index(unit), steps - 1)


def repair(chromosome: Chromosome, board: Board, rng: random.Random,
           max_retries: int = 32) -> Chromosome:
    """Make every gene decode to a playable move along the chromosome's
    own forward line (opponent plies are skipped as unknown).

    Valid genes keep their original bits, so a fully valid chromosome
    passes through unchanged. Raises NoLegalMoveError only when the
    game position itself offers the mover no move at gene 0.
    """
    color = chromosome.color
    sim = board if board.side == color else board.pass_turn()
    genes = parse_genes(chromosome)
    out_bits = []
    validate = True
    for k in range(chromosome.gene_count):
        if validate and not sim.has_any_legal_move():
            if k == 0 and board.side == color:
                raise NoLegalMoveError("no legal move at the root position")
            # line has hit a terminal; later genes cannot be validated
            validate = False
        gene = genes[k] if k < len(genes) else None
        if gene is None:
            gene = random_gene(color, rng)
        if not validate:
            out_bits.extend(gene.bits)
            continue
        move = decode(gene, sim)
        retries = 0
        while move is None and retries < max_retries:
            gene = random_gene(color, rng)
            move = decode(gene, sim)
            retries += 1
        if move is None:
            options = [m for m in sim.legal_moves() if is_encodable(m)]
            if not options:
                # every mobile piece is a surplus promotion; the 16-code
                # language cannot express any move from here, though the
                # game itself goes on (the engine plays a fallback move)
                validate = False
                out_bits.extend(gene.bits)
                continue
            move = rng.choice(options)
            gene = encode_move(move)
        out_bits.extend(gene.bits)
        sim = sim.apply_unchecked(move).pass_turn()
    return Chromosome(tuple(out_bits), color, chromosome.gene_count)


def uniform_crossover(a: Chromosome, b: Chromosome, cfg: VariationConfig,
                      rng: random.Random) -> tuple[Chromosome, Chromosome]:
    if a.color != b.color or a.gene_count != b.gene_count:
        raise LengthMismatchError("parents must share color and gene count")
    if rng.random() >= cfg.crossover_prob:
        return a, b
    a_bits, b_bits = list(a.bits), list(b.bits)
    for i in range(min(len(a_bits), len(b_bits))):
        if rng.random() < cfg.uniform_level:
            a_bits[i], b_bits[i] = b_bits[i], a_bits[i]
    return (Chromosome(tuple(a_bits), a.color, a.gene_count),
            Chromosome(tuple(b_bits), b.color, b.gene_count))


def mutate(c: Chromosome, cfg: VariationConfig, rng: random.Random) -> Chromosome:
    bits = [b ^ 1 if rng.random() < cfg.mutation_prob_per_bit else b for b in c.bits]
    if cfg.inversion_enabled and rng.random() < cfg.mutation_prob_per_bit:
        i = rng.randrange(len(bits))
        j = rng.randrange(len(bits))
        if i > j:
            i, j = j, i
        bits[i:j + 1] = bits[i:j + 1][::-1]
    return Chromosome(tuple(bits), c.color, c.gene_count)


_PIECE_LABELS = {PAWN: "P", ROOK: "R", KNIGHT: "N", BISHOP: "B", QUEEN: "Q", KING: "K"}
_DIR_NAMES = ("N", "NE", "E", "SE", "S", "SW", "W", "NW")
_PAWN_DIR_NAMES = ("fwd", "capL", "capR", "dbl")


def _gene_label(gene: Gene) -> str:
    label = _PIECE_LABELS[gene.kind]
    if gene.kind in (PAWN, ROOK, KNIGHT, BISHOP):
        label += str(gene.ordinal)
    if gene.kind == PAWN:
        label += f" {_PAWN_DIR_NAMES[gene.direction]}"
    elif gene.kind == KING and gene.direction >= 8:
        label += " O-O" if gene.direction == KING_CASTLE_SHORT_DIR else " O-O-O"
    elif gene.kind == KNIGHT:
        label += f" j{gene.direction}"
    elif gene.kind == ROOK:
        label += f" {_DIR_NAMES[(0, 2, 4, 6)[gene.direction]]}{gene.displacement}"
    elif gene.kind == BISHOP:
        label += f" {_DIR_NAMES[(1, 3, 5, 7)[gene.direction]]}{gene.displacement}"
    elif gene.kind == QUEEN:
        label += f" {_DIR_NAMES[gene.direction]}{gene.displacement}"
    else:
        label += f" {_DIR_NAMES[gene.direction]}"
    return label


def debug_string(chromosome: Chromosome, board: Board | None = None) -> str:
    """Hex bitstring plus per-gene annotations for experiment logs."""
    n = len(chromosome.bits)
    value = _bits_to_int(chromosome.bits)
    hex_width = (n + 3) // 4
    head = f"{'wb'[chromosome.color]}:{n}b:{value:0{hex_width}x}"
    parts = []
    sim = None
    if board is not None:
        sim = board if board.side == chromosome.color else board.pass_turn()
    for gene in parse_genes(chromosome):
        label = _gene_label(gene)
        if sim is not None:
            move = decode(gene, sim)
            if move is None:
                label += "->invalid"
                sim = sim.pass_turn().pass_turn()
            else:
                label += f"->{move}"
                sim = sim.apply_unchecked(move).pass_turn()
        parts.append(label)
    return head + " [" + "; ".join(parts) + "]"
