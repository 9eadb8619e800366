"""Static board evaluation.

Six scoring categories: material weight, absolute position (matrix
lookups), relative position (the per-piece bonus/penalty rules),
mobility, proximity to the enemy King, and the menace-protection
exchange term for the piece that just moved.  All values come from a
ScoreTables instance so they stay inspectable and overridable.

Scores are integers throughout.  ``evaluate_board`` nets the first five
categories own-minus-opponent and adds the signed MP term; a side to
move with no legal move picks up the -10000 King term, which makes
terminal positions dominate any positional sum.
"""

from __future__ import annotations

from dataclasses import dataclass

from .board import (
    BISHOP,
    Board,
    DIAG_DIRS,
    EMPTY,
    KING,
    KING_STEPS,
    KNIGHT,
    KNIGHT_STEPS,
    ORTHO_DIRS,
    PAWN,
    QUEEN,
    RAYS,
    ROOK,
    WHITE,
    piece_color,
    piece_kind,
    piece_ordinal,
    sq_file,
    sq_rank,
    square,
)
from .genome import decode
from .tables import ScoreTables, ap_value, default_tables

STAGE_BEGINNING = "beginning"
STAGE_END = "end"

CATEGORIES = ("material", "ap", "rp", "mobility", "proximity", "mp")


def game_stage(board: Board) -> str:
    """End stage once fewer than 6 minor pieces (both colors) remain."""
    minors = 0
    for p in board.piece_sq:
        if piece_kind(p) in (KNIGHT, BISHOP):
            minors += 1
    return STAGE_END if minors < 6 else STAGE_BEGINNING


@dataclass(frozen=True, slots=True)
class ScoreBreakdown:
    """Per-category points as (own, opponent) pairs plus the signed MP term.

    ``total`` nets every pair own-minus-opponent and adds ``mp``; positive
    favours ``perspective``.
    """

    perspective: int
    material: tuple
    ap: tuple
    rp: tuple
    mobility: tuple
    proximity: tuple
    mp: int
    total: int

    def nets(self) -> dict:
        """Signed per-category contributions, as shown to the player."""
        out = {}
        for name in CATEGORIES[:-1]:
            own, opp = getattr(self, name)
            out[name] = own - opp
        out["mp"] = self.mp
        return out

    def as_dict(self) -> dict:
        return {
            "perspective": self.perspective,
            "material": list(self.material),
            "ap": list(self.ap),
            "rp": list(self.rp),
            "mobility": list(self.mobility),
            "proximity": list(self.proximity),
            "mp": self.mp,
            "total": self.total,
        }


# ---- mobility ----

def _slider_destinations(board: Board, color: int, sq: int, dirs) -> int:
    # squares the piece can move to: empty ones plus the first enemy
    # occupant of each ray (enemy King excluded, it cannot be captured)
    placement = board.placement
    rays = RAYS[sq]
    n = 0
    for d in dirs:
        for t in rays[d]:
            p = placement[t]
            if p == EMPTY:
                n += 1
                continue
            if piece_color(p) != color and piece_kind(p) != KING:
                n += 1
            break
    return n


def mobility_count(board: Board, piece: int) -> int:
    sq = board.piece_sq[piece]
    color, kind = piece_color(piece), piece_kind(piece)
    if kind == ROOK:
        return _slider_destinations(board, color, sq, ORTHO_DIRS)
    if kind == BISHOP:
        return _slider_destinations(board, color, sq, DIAG_DIRS)
    if kind == QUEEN:
        return _slider_destinations(board, color, sq, ORTHO_DIRS + DIAG_DIRS)
    if kind == KNIGHT:
        placement = board.placement
        return sum(1 for t in KNIGHT_STEPS[sq] if placement[t] == EMPTY)
    raise ValueError(f"no mobility for kind {kind}")


def _mobility(board: Board, piece: int, kind: int, stage: str,
              tables: ScoreTables) -> int:
    n = mobility_count(board, piece)
    if kind == ROOK:
        return tables.rook_mobility[min(n, 12)]
    if kind == KNIGHT:
        return tables.knight_mobility[n]
    if kind == BISHOP:
        return tables.bishop_mobility[min(n, 13)]
    if kind == QUEEN:
        table = (tables.queen_mobility_begin if stage == STAGE_BEGINNING
                 else tables.queen_mobility_end)
        return table[min(n, len(table) - 1)]
    raise ValueError(f"no mobility for kind {kind}")


def mobility_score(board: Board, piece: int, tables: ScoreTables | None = None) -> int:
    tables = tables or default_tables()
    return _mobility(board, piece, piece_kind(piece), game_stage(board), tables)


# ---- proximity to the enemy King ----

def proximity_score(board: Board, piece: int, tables: ScoreTables | None = None) -> int:
    tables = tables or default_tables()
    kind = piece_kind(piece)
    sq = board.piece_sq[piece]
    ek = board.king_square(1 - piece_color(piece))
    dr = abs(sq_rank(sq) - sq_rank(ek))
    df = abs(sq_file(sq) - sq_file(ek))
    if kind == ROOK:
        # per-axis lookup; distance 0 on an axis contributes nothing
        return tables.rook_proximity_axis[dr] + tables.rook_proximity_axis[df]
    if kind == KNIGHT:
        return tables.knight_proximity[dr + df]
    if kind == QUEEN:
        return tables.queen_proximity[dr + df]
    raise ValueError(f"no proximity for kind {kind}")


# ---- absolute position ----

def _ap(board: Board, piece: int, sq: int, stage: str, tables: ScoreTables) -> int:
    color, kind = piece_color(piece), piece_kind(piece)
    if kind in (ROOK, QUEEN):
        return 0
    if kind == PAWN:
        if stage == STAGE_END:
            matrix = tables.pawn_ap_end
        else:
            castled = board.has_castled[color]
            if castled == 1:
                matrix = tables.pawn_ap_castled_right
            elif castled == 2:
                matrix = tables.pawn_ap_castled_left
            else:
                matrix = tables.pawn_ap_begin
        return ap_value(matrix, color, sq)
    if kind == KNIGHT:
        return ap_value(tables.knight_ap, color, sq)
    if kind == BISHOP:
        return ap_value(tables.bishop_ap, color, sq)
    matrix = tables.king_ap_begin if stage == STAGE_BEGINNING else tables.king_ap_end
    return ap_value(matrix, color, sq)


def ap_score(board: Board, piece: int, tables: ScoreTables | None = None) -> int:
    tables = tables or default_tables()
    return _ap(board, piece, board.piece_sq[piece], game_stage(board), tables)


# ---- relative position ----

class _Ctx:
    """Board facts shared by the per-piece scorers, gathered in one pass.

    Everything here is derivable from the board; the context only exists
    so a full-board evaluation does not rescan piece_sq per piece.
    """

    __slots__ = ("stage", "pawns", "pawn_files", "rooks", "bishop_ords",
                 "bishop_sqs")

    def __init__(self, board: Board):
        pawns = ([], [])            # (file, rank) per color
        pawn_files = (set(), set())
        rooks = ([], [])            # (file, piece) per color
        bishop_ords = ([], [])
        bishop_sqs = ([], [])
        minors = 0
        for p, s in board.piece_sq.items():
            kind = (p >> 4) & 7
            c = p >> 7
            if kind == PAWN:
                pawns[c].append((s & 7, s >> 3))
                pawn_files[c].add(s & 7)
            elif kind == ROOK:
                rooks[c].append((s & 7, p))
            elif kind == KNIGHT:
                minors += 1
            elif kind == BISHOP:
                minors += 1
                bishop_ords[c].append((p & 15) + 1)
                bishop_sqs[c].append((s & 7, s >> 3))
        self.stage = STAGE_END if minors < 6 else STAGE_BEGINNING
        self.pawns = pawns
        self.pawn_files = pawn_files
        self.rooks = rooks
        self.bishop_ords = bishop_ords
        self.bishop_sqs = bishop_sqs


def _protector_count(board: Board, color: int, f: int, r: int) -> int:
    # friendly pawns defending the square (f, r)
    placement = board.placement
    back = r - (1 if color == WHITE else -1)
    if not 0 <= back < 8:
        return 0
    n = 0
    for nf in (f - 1, f + 1):
        if 0 <= nf < 8:
            p = placement[square(nf, back)]
            if p != EMPTY and piece_color(p) == color and piece_kind(p) == PAWN:
                n += 1
    return n


def _is_passed(f: int, r: int, fwd: int, enemy_pawns) -> bool:
    return not any(abs(ef - f) <= 1 and (er - r) * fwd > 0 for ef, er in enemy_pawns)


def _rp_pawn(board, color, f, r, rp, ctx):
    fwd = 1 if color == WHITE else -1
    # self shows up in `own` but can never satisfy the predicates below
    # (zero rank gap, zero file gap), so it needs no special-casing
    own = ctx.pawns[color]
    enemy = ctx.pawns[1 - color]
    score = rp["pawn_protected"] * _protector_count(board, color, f, r)
    for pf, pr in own:
        if pf == f and (pr - r) * fwd > 0:
            score += rp["pawn_doubled"]
            break
    own_files = ctx.pawn_files[color]
    if f - 1 not in own_files and f + 1 not in own_files:
        score += rp["pawn_isolated"]
    if f not in ctx.pawn_files[1 - color]:
        score += rp["pawn_no_enemy_file"]
    if _is_passed(f, r, fwd, enemy):
        score += rp["pawn_passed"]
        if any(abs(pf - f) == 1 and _is_passed(pf, pr, fwd, enemy) for pf, pr in own):
            score += rp["pawn_passed_linked"]
        nr = r + fwd
        if 0 <= nr < 8:
            blocker = board.placement[square(f, nr)]
            if blocker != EMPTY and piece_color(blocker) != color:
                if piece_kind(blocker) == KNIGHT:
                    score += rp["pawn_passed_blocked_by_knight"]
                elif piece_kind(blocker) == BISHOP:
                    score += rp["pawn_passed_blocked_by_bishop"]
    return score


def _rp_rook(board, piece, color, f, r, rp, ctx):
    score = 0
    if r == (6 if color == WHITE else 1):
        score += rp["rook_on_seventh"]
    for rf, other in ctx.rooks[color]:
        if other != piece and rf == f:
            score += rp["rook_doubled_file"]
            break
    placement = board.placement
    rays = RAYS[square(f, r)]
    menaced = False
    for d in ORTHO_DIRS:
        for t in rays[d]:
            p = placement[t]
            if p == EMPTY:
                continue
            if piece_color(p) != color and piece_kind(p) == PAWN:
                menaced = True
            break
        if menaced:
            break
    if menaced:
        score += rp["rook_menaces_pawns"]
    if f not in ctx.pawn_files[1 - color]:
        score += rp["rook_no_enemy_pawn_file"]
    if piece in board.rooks_early:
        # moved before castling while the castle was still available;
        # ordinal 1 is the Queen's Rook, 2 the King's
        score += (rp["rook_queenside_early"] if piece_ordinal(piece) == 1
                  else rp["rook_kingside_early"])
    return score


def _rp_knight(board, color, f, r, rp):
    ek = board.king_square(1 - color)
    if abs(f - sq_file(ek)) + abs(r - sq_rank(ek)) < 7:
        return rp["knight_protected_close"] * _protector_count(board, color, f, r)
    return 0


def _rp_bishop(board, piece, color, f, r, rp, ctx):
    score = 0
    living = ctx.bishop_ords[color]
    if len(living) >= 2 and piece_ordinal(piece) == min(living):
        score += rp["bishop_pair"]
    placement = board.placement
    for df in (-1, 1):
        for dr in (-1, 1):
            nf, nr = f + df, r + dr
            if 0 <= nf < 8 and 0 <= nr < 8:
                p = placement[square(nf, nr)]
                if p != EMPTY and piece_kind(p) == PAWN:
                    score += rp["bishop_diagonal_pawn"]
    return score


def _rp_queen(board, color, f, r, rp, ctx):
    score = 0
    for bf, br in ctx.bishop_sqs[color]:
        if abs(bf - f) == abs(br - r):
            score += rp["queen_bishop_diagonal"]
            break
    if board.queen_early[color]:
        score += rp["queen_early_development"]
    if r == (6 if color == WHITE else 1):
        score += rp["queen_on_seventh"]
    if f not in ctx.pawn_files[0] and f not in ctx.pawn_files[1]:
        score += rp["queen_pawn_free_file"]
    return score


def _rp_king(board, color, sq, rp):
    score = 0
    if color == board.side and not board.has_any_legal_move():
        score += rp["king_checkmated"]
    if board.has_castled[color]:
        score += rp["king_castled"]
    elif board.king_moved[color]:
        score += rp["king_first_move_not_castle"]
    placement = board.placement
    balance = 0
    for t in KING_STEPS[sq]:
        p = placement[t]
        if p == EMPTY:
            continue
        w = rp["king_queen_surround_count"] if piece_kind(p) == QUEEN else 1
        balance += w if piece_color(p) == color else -w
    score += rp["king_surround_per_piece"] * balance
    score += rp["king_shield_move_after_castle"] * board.shield_moves[color]
    return score


def _rp_dispatch(board, piece, sq, rp, ctx):
    color, kind = piece >> 7, (piece >> 4) & 7
    f, r = sq & 7, sq >> 3
    if kind == PAWN:
        return _rp_pawn(board, color, f, r, rp, ctx)
    if kind == ROOK:
        return _rp_rook(board, piece, color, f, r, rp, ctx)
    if kind == KNIGHT:
        return _rp_knight(board, color, f, r, rp)
    if kind == BISHOP:
        return _rp_bishop(board, piece, color, f, r, rp, ctx)
    if kind == QUEEN:
        return _rp_queen(board, color, f, r, rp, ctx)
    return _rp_king(board, color, sq, rp)


def rp_score(board: Board, piece: int, tables: ScoreTables | None = None) -> int:
    tables = tables or default_tables()
    return _rp_dispatch(board, piece, board.piece_sq[piece], tables.rp, _Ctx(board))


# ---- menace-protection exchange ----

def _exchange(target_weight: int, attackers, defenders) -> int:
    """Alternating capture sequence on one square, owner's perspective.

    ``attackers``/``defenders`` are ascending (weight, kind) lists.  The
    defender recaptures whenever it can; the attacker stops when
    continuing cannot lower the owner's balance.  A King joins only when
    the other side has no capturer left to answer with.
    """
    candidates = [0]
    s = 0
    on_square = target_weight
    ai = di = 0
    while ai < len(attackers):
        weight, kind = attackers[ai]
        if kind == KING and di < len(defenders):
            break
        s -= on_square
        on_square = weight
        ai += 1
        if di >= len(defenders):
            candidates.append(s)
            break
        d_weight, d_kind = defenders[di]
        if d_kind == KING and ai < len(attackers):
            candidates.append(s)
            break
        s += on_square
        on_square = d_weight
        di += 1
        candidates.append(s)
    return min(candidates)


def mp_score(board: Board, piece: int, tables: ScoreTables | None = None) -> int:
    """Menace-protection term for `piece`, from its owner's perspective."""
    tables = tables or default_tables()
    sq = board.piece_sq[piece]
    owner = piece_color(piece)
    attackers = sorted((tables.weight(piece_kind(p)), piece_kind(p))
                       for p in board.attackers_of(sq, 1 - owner))
    if not attackers:
        return 0
    defenders = sorted((tables.weight(piece_kind(p)), piece_kind(p))
                       for p in board.attackers_of(sq, owner))
    return _exchange(tables.weight(piece_kind(piece)), attackers, defenders)


# ---- composition ----

def evaluate_board(board: Board, perspective: int,
                   tables: ScoreTables | None = None) -> ScoreBreakdown:
    tables = tables or default_tables()
    ctx = _Ctx(board)
    stage = ctx.stage
    rp = tables.rp
    weights = tables.piece_weights
    material = [0, 0]
    ap = [0, 0]
    rel = [0, 0]
    mobility = [0, 0]
    proximity = [0, 0]
    for p, sq in board.piece_sq.items():
        c, kind = p >> 7, (p >> 4) & 7
        material[c] += weights[kind]
        ap[c] += _ap(board, p, sq, stage, tables)
        rel[c] += _rp_dispatch(board, p, sq, rp, ctx)
        if kind in (ROOK, KNIGHT, BISHOP, QUEEN):
            mobility[c] += _mobility(board, p, kind, stage, tables)
        if kind in (ROOK, KNIGHT, QUEEN):
            proximity[c] += proximity_score(board, p, tables)

    mp = 0
    mv = board.last_move
    if mv is not None:
        target = board.placement[mv.to_sq]
        if target != EMPTY:
            raw = mp_score(board, target, tables)
            mp = raw if piece_color(target) == perspective else -raw

    me, opp = perspective, 1 - perspective
    total = mp
    pairs = {}
    for name, acc in (("material", material), ("ap", ap), ("rp", rel),
                      ("mobility", mobility), ("proximity", proximity)):
        pairs[name] = (acc[me], acc[opp])
        total += acc[me] - acc[opp]
    return ScoreBreakdown(perspective=perspective, mp=mp, total=total, **pairs)


class PlayoutCache:
    """Board-graph reuse for the many near-identical playouts of one search.

    Converged populations replay the same move lines generation after
    generation; routing playouts through one of these keeps a single Board
    instance per reached position, so move-generation caches and static
    totals amortize.  Purely an optimization: results are identical with
    and without a cache.

    The caller must keep the starting board alive for the cache's
    lifetime (child positions are retained here, so the id-based keys of
    everything derived from them stay valid).
    """

    __slots__ = ("children", "passes", "totals")

    def __init__(self):
        self.children = {}
        self.passes = {}
        self.totals = {}

    def child(self, board: Board, move) -> Board:
        key = (id(board), move)
        b = self.children.get(key)
        if b is None:
            b = board.apply_unchecked(move)
            self.children[key] = b
        return b

    def passed(self, board: Board) -> Board:
        b = self.passes.get(id(board))
        if b is None:
            b = board.pass_turn()
            self.passes[id(board)] = b
        return b

    def total(self, board: Board, perspective: int, tables) -> int:
        key = (id(board), perspective)
        t = self.totals.get(key)
        if t is None:
            t = evaluate_board(board, perspective, tables).total
            self.totals[key] = t
        return t


def evaluate_mixed(genes, start: Board, tables: ScoreTables | None = None, *,
                   mode: str = "sum", skip_penalty: int = -50,
                   cache: PlayoutCache | None = None) -> int:
    """Playout fitness of an interleaved gene line from ``start``.

    Plays genes in order for alternating sides, always scoring from the
    perspective of the player to move at ``start``.  A gene that does not
    decode to a legal move is skipped with a null ply and ``skip_penalty``.
    When the side to move has no legal move the playout stops and, in
    ``sum`` mode, the terminal evaluation fills the unplayed slots so the
    -10000 term dominates.  ``last_move`` mode scores only the final
    position (plus accumulated penalties).
    """
    if mode not in ("sum", "last_move"):
        raise ValueError(f"unknown fitness mode {mode!r}")
    tables = tables or default_tables()
    root = start.side
    board = start
    total = 0
    penalties = 0
    slots = len(genes)
    i = 0
    while i < slots:
        if not board.legal_moves():
            if mode == "sum":
                total += _total(board, root, tables, cache) * (slots - i)
            break
        move = decode(genes[i], board)
        if move is None:
            board = cache.passed(board) if cache else board.pass_turn()
            penalties += skip_penalty
        else:
            board = cache.child(board, move) if cache else board.apply_unchecked(move)
            if mode == "sum":
                total += _total(board, root, tables, cache)
        i += 1
    if mode == "last_move":
        return _total(board, root, tables, cache) + penalties
    return total + penalties


def _total(board: Board, perspective: int, tables, cache) -> int:
    if cache is not None:
        return cache.total(board, perspective, tables)
    return evaluate_board(board, perspective, tables).total
