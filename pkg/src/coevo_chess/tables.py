"""Score tables for the static evaluator.

All numeric scoring data lives in one versioned JSON file so it can be
inspected, checksummed and swapped out with --tables. Matrices are stored
from White's perspective with row 0 = rank 8, the way the tables are
printed; mirror by rank for White, read directly for Black.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from types import MappingProxyType

from .board import PAWN, ROOK, KNIGHT, BISHOP, QUEEN, KING

__all__ = [
    "ScoreTables", "TableFormatError", "load_score_tables", "default_tables",
    "default_tables_path", "table_file_sha256", "ap_value",
]

KIND_NAMES = {
    "pawn": PAWN, "rook": ROOK, "knight": KNIGHT,
    "bishop": BISHOP, "queen": QUEEN, "king": KING,
}

RP_KEYS = (
    "pawn_protected", "pawn_doubled", "pawn_isolated", "pawn_no_enemy_file",
    "pawn_passed", "pawn_passed_linked",
    "pawn_passed_blocked_by_knight", "pawn_passed_blocked_by_bishop",
    "rook_on_seventh", "rook_doubled_file", "rook_menaces_pawns",
    "rook_no_enemy_pawn_file", "rook_kingside_early", "rook_queenside_early",
    "knight_protected_close",
    "bishop_pair", "bishop_diagonal_pawn",
    "queen_bishop_diagonal", "queen_early_development", "queen_on_seventh",
    "queen_pawn_free_file",
    "king_checkmated", "king_castled", "king_first_move_not_castle",
    "king_surround_per_piece", "king_queen_surround_count",
    "king_shield_move_after_castle",
)

_MATRIX_KEYS = (
    "pawn_ap_begin", "pawn_ap_end", "pawn_ap_castled_left",
    "pawn_ap_castled_right", "knight_ap", "bishop_ap",
    "king_ap_begin", "king_ap_end",
)

# (key, lowest index, highest index)
_RANGE_KEYS = (
    ("rook_mobility", 0, 12),
    ("rook_proximity_axis", 1, 7),
    ("knight_mobility", 0, 8),
    ("knight_proximity", 1, 14),
    ("bishop_mobility", 0, 13),
    ("queen_mobility_begin", 0, 28),
    ("queen_mobility_end", 0, 28),
    ("queen_proximity", 1, 14),
)


class TableFormatError(ValueError):
    pass


@dataclass(frozen=True)
class ScoreTables:
    """Immutable bundle of every scoring table the evaluator reads.

    Lookup tables are tuples indexed directly by count/distance; entries
    below the table's lowest printed index are 0 (a rook sharing a row
    with the enemy king has axis distance 0 and contributes nothing on
    that axis).
    """

    version: int
    piece_weights: tuple           # indexed by piece kind constant
    pawn_ap_begin: tuple
    pawn_ap_end: tuple
    pawn_ap_castled_left: tuple
    pawn_ap_castled_right: tuple
    knight_ap: tuple
    bishop_ap: tuple
    king_ap_begin: tuple
    king_ap_end: tuple
    rook_mobility: tuple
    rook_proximity_axis: tuple
    knight_mobility: tuple
    knight_proximity: tuple
    bishop_mobility: tuple
    queen_mobility_begin: tuple
    queen_mobility_end: tuple
    queen_proximity: tuple
    rp: MappingProxyType

    def weight(self, kind: int) -> int:
        return self.piece_weights[kind]


def default_tables_path() -> Path:
    return Path(resources.files("coevo_chess").joinpath("data/score_tables.json"))


def table_file_sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _require(cond: bool, msg: str):
    if not cond:
        raise TableFormatError(msg)


def _parse_matrix(raw, key: str) -> tuple:
    _require(isinstance(raw, list) and len(raw) == 8, f"{key}: need 8 rows")
    rows = []
    for i, row in enumerate(raw):
        _require(isinstance(row, list) and len(row) == 8, f"{key}: row {i} needs 8 cells")
        _require(all(isinstance(v, int) for v in row), f"{key}: row {i} has non-integer cells")
        rows.append(tuple(row))
    return tuple(rows)


def _parse_range(raw, key: str, lo: int, hi: int) -> tuple:
    _require(isinstance(raw, dict), f"{key}: need an object of index -> points")
    want = {str(i) for i in range(lo, hi + 1)}
    _require(set(raw) == want, f"{key}: keys must be exactly {lo}..{hi}")
    _require(all(isinstance(v, int) for v in raw.values()), f"{key}: non-integer points")
    # pad below lo with zeros so tuples index directly by count
    return tuple([0] * lo + [raw[str(i)] for i in range(lo, hi + 1)])


def load_score_tables(path: str | Path | None = None) -> ScoreTables:
    source = Path(path) if path is not None else default_tables_path()
    try:
        raw = json.loads(source.read_text())
    except OSError as exc:
        raise TableFormatError(f"cannot read score tables: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise TableFormatError(f"score tables are not valid JSON: {exc}") from exc
    _require(isinstance(raw, dict), "top level must be an object")

    known = {"version", "piece_weights", "rp_constants"}
    known.update(_MATRIX_KEYS)
    known.update(k for k, _, _ in _RANGE_KEYS)
    unknown = set(raw) - known
    _require(not unknown, f"unknown keys: {sorted(unknown)}")
    missing = known - set(raw)
    _require(not missing, f"missing keys: {sorted(missing)}")

    _require(raw["version"] == 1, f"unsupported table version {raw['version']!r}")

    weights_raw = raw["piece_weights"]
    _require(set(weights_raw) == set(KIND_NAMES), "piece_weights: need all six piece kinds")
    _require(all(isinstance(v, int) and v > 0 for v in weights_raw.values()),
             "piece_weights: weights must be positive integers")
    weights = [0] * 6
    for name, kind in KIND_NAMES.items():
        weights[kind] = weights_raw[name]

    fields = {"version": 1, "piece_weights": tuple(weights)}
    for key in _MATRIX_KEYS:
        fields[key] = _parse_matrix(raw[key], key)
    for key, lo, hi in _RANGE_KEYS:
        fields[key.replace("-", "_")] = _parse_range(raw[key], key, lo, hi)

    rp_raw = raw["rp_constants"]
    _require(set(rp_raw) == set(RP_KEYS), "rp_constants: key set mismatch")
    _require(all(isinstance(v, int) for v in rp_raw.values()),
             "rp_constants: non-integer values")
    fields["rp"] = MappingProxyType(dict(rp_raw))

    return ScoreTables(**fields)


_DEFAULT = None


def default_tables() -> ScoreTables:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_score_tables()
    return _DEFAULT


def ap_value(matrix: tuple, color: int, sq: int) -> int:
    """Matrix cell for a piece of `color` on `sq`.

    Row 0 of the stored matrix is rank 8, so White reads rank-mirrored
    and Black reads directly; files are never mirrored.
    """
    rank, file = sq >> 3, sq & 7
    row = 7 - rank if color == 0 else rank
    return matrix[row][file]
