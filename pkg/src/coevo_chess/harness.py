"""Seeded engine-vs-engine series for the ablation experiments.

A MatchSpec pairs two engine configs. run_series plays the games with
per-game seeds and alternating colors and tallies wins, ties and
cutoffs; the canonical result serialization excludes wall-clock so a
re-run of the same spec reproduces it byte for byte.
"""

import dataclasses
import math
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .board import (BLACK, ONGOING, TECHNICAL_TIE, WHITE, format_move,
                    initial_board)
from .engine import CoevoEngine, EngineConfig

__all__ = [
    "MatchSpec", "GameRecord", "SeriesResult", "UnknownFormat", "mirrored",
    "run_series", "report", "report_suite", "write_series_logs",
    "wilson_interval", "desk_config", "preset_rows", "PRESET_NAMES",
]


class UnknownFormat(ValueError):
    """Raised by report() for a format name it does not speak."""


@dataclass(frozen=True)
class MatchSpec:
    config_a: EngineConfig
    config_b: EngineConfig
    games: int = 20
    seed_base: int = 0
    max_plies: int = 300
    color_alternation: bool = True
    first_white: str = "a"

    def __post_init__(self):
        if self.games < 1:
            raise ValueError("a series needs at least one game")
        if self.max_plies < 1:
            raise ValueError("max_plies must be positive")
        if self.first_white not in ("a", "b"):
            raise ValueError("first_white must be 'a' or 'b'")


def mirrored(spec: MatchSpec) -> MatchSpec:
    """The same series seen from the other label: configs swapped and
    colors mirrored, so game i is the identical chess game relabeled."""
    return dataclasses.replace(spec, config_a=spec.config_b,
                               config_b=spec.config_a,
                               first_white="b" if spec.first_white == "a" else "a")


@dataclass(frozen=True, slots=True)
class GameRecord:
    index: int
    seed: int
    white: str            # "a" or "b"
    plies: int
    outcome: str          # "a", "b", "tie" or "cutoff"
    reason: str           # termination outcome, or "cutoff"
    moves: tuple
    elapsed: float = 0.0

    def line(self) -> str:
        return (f"game={self.index} seed={self.seed} white={self.white} "
                f"plies={self.plies} outcome={self.outcome} "
                f"reason={self.reason} moves={','.join(self.moves)}")


@dataclass(frozen=True)
class SeriesResult:
    wins_a: int
    wins_b: int
    ties: int
    cutoffs: int
    records: tuple
    spec: MatchSpec | None = None
    elapsed_total: float = 0.0

    def __post_init__(self):
        total = self.wins_a + self.wins_b + self.ties + self.cutoffs
        if total != len(self.records):
            raise ValueError("outcome counts must sum to the game count")

    @property
    def games(self) -> int:
        return len(self.records)

    @property
    def decisive(self) -> int:
        return self.wins_a + self.wins_b

    def canonical_lines(self) -> list[str]:
        # wall-clock fields stay out so reruns are byte-identical
        out = []
        if self.spec is not None:
            out.append(f"spec games={self.spec.games} "
                       f"seed_base={self.spec.seed_base} "
                       f"max_plies={self.spec.max_plies} "
                       f"alternate={int(self.spec.color_alternation)} "
                       f"first_white={self.spec.first_white}")
            out.append(f"config_a {self.spec.config_a!r}")
            out.append(f"config_b {self.spec.config_b!r}")
        out.append(f"totals wins_a={self.wins_a} wins_b={self.wins_b} "
                   f"ties={self.ties} cutoffs={self.cutoffs}")
        out.extend(rec.line() for rec in self.records)
        return out

    def canonical_bytes(self) -> bytes:
        return ("\n".join(self.canonical_lines()) + "\n").encode()


def _play_game(spec: MatchSpec, index: int, tables) -> GameRecord:
    seed = spec.seed_base + index
    phase = 0 if spec.first_white == "a" else 1
    a_is_white = ((index + phase) % 2 == 0 if spec.color_alternation
                  else spec.first_white == "a")
    cfg_white = spec.config_a if a_is_white else spec.config_b
    cfg_black = spec.config_b if a_is_white else spec.config_a
    # rng streams attach to the color seat, so swapping the configs
    # replays the same chess game with the labels exchanged
    engines = {
        WHITE: CoevoEngine(WHITE, cfg_white, tables=tables,
                           rng=random.Random(seed * 2)),
        BLACK: CoevoEngine(BLACK, cfg_black, tables=tables,
                           rng=random.Random(seed * 2 + 1)),
    }
    t0 = time.monotonic()
    board = initial_board()
    moves = []
    term = None
    while True:
        verdict = board.detect_termination()
        if verdict.outcome != ONGOING:
            term = verdict
            break
        if board.ply >= spec.max_plies:
            break
        move, _ = engines[board.side].select_move(board)
        moves.append(format_move(move))
        board = board.apply(move)

    if term is None:
        outcome, reason = "cutoff", "cutoff"
    elif term.winner is None:
        outcome, reason = "tie", term.outcome
    else:
        side_label = {True: ("a", "b"), False: ("b", "a")}[a_is_white]
        outcome = side_label[0] if term.winner == WHITE else side_label[1]
        reason = term.outcome
    return GameRecord(index, seed, "a" if a_is_white else "b", board.ply,
                      outcome, reason, tuple(moves),
                      time.monotonic() - t0)


def run_series(spec: MatchSpec, tables=None, workers: int = 1,
               on_game=None) -> SeriesResult:
    """Play the whole series; deterministic for a given spec.

    Games are independent, so workers > 1 fans them out over threads;
    records are re-sorted by index, making aggregation order-free.
    on_game, when given, is called with each finished GameRecord.
    """
    t0 = time.monotonic()
    indices = range(spec.games)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda i: _play_game(spec, i, tables),
                                    indices))
    else:
        records = [_play_game(spec, i, tables) for i in indices]
    records.sort(key=lambda r: r.index)
    if on_game is not None:
        for rec in records:
            on_game(rec)
    tally = {"a": 0, "b": 0, "tie": 0, "cutoff": 0}
    for rec in records:
        tally[rec.outcome] += 1
    return SeriesResult(tally["a"], tally["b"], tally["tie"], tally["cutoff"],
                        tuple(records), spec=spec,
                        elapsed_total=time.monotonic() - t0)


def wilson_interval(successes: int, trials: int, z: float = 1.96):
    """Wilson score interval for a binomial proportion."""
    if trials == 0:
        return (0.0, 1.0)
    p = successes / trials
    zz = z * z
    denom = 1.0 + zz / trials
    center = (p + zz / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + zz / (4 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


_COLUMNS = ("name", "games", "wins_a", "wins_b", "ties", "cutoffs",
            "decisive", "share_a", "wilson_lo", "wilson_hi")


def _row_values(name: str, result: SeriesResult) -> tuple:
    decisive = result.decisive
    share = result.wins_a / decisive if decisive else float("nan")
    lo, hi = wilson_interval(result.wins_a, decisive)
    return (name, result.games, result.wins_a, result.wins_b, result.ties,
            result.cutoffs, decisive, f"{share:.3f}", f"{lo:.3f}", f"{hi:.3f}")


def report_suite(rows, format: str) -> str:
    """Tabulate named series results; one line per experiment.

    rows is an iterable of (name, SeriesResult). Formats: text, csv.
    An empty rows list still yields the header.
    """
    if format == "csv":
        lines = [",".join(_COLUMNS)]
        lines += [",".join(str(v) for v in _row_values(n, r)) for n, r in rows]
        return "\n".join(lines) + "\n"
    if format == "text":
        table = [_COLUMNS] + [tuple(str(v) for v in _row_values(n, r))
                              for n, r in rows]
        widths = [max(len(row[i]) for row in table) for i in range(len(_COLUMNS))]
        return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
                         for row in table) + "\n"
    raise UnknownFormat(f"unknown report format {format!r}")


def report(result: SeriesResult, format: str, name: str = "series") -> str:
    """Single-series summary in the same tabular shape as report_suite."""
    rows = [] if result.games == 0 else [(name, result)]
    return report_suite(rows, format)


def write_series_logs(result: SeriesResult, out_dir, name: str = "series"):
    """Per-game replayable logs plus text and csv summaries."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for rec in result.records:
        lines = [f"seed={rec.seed} white={rec.white} outcome={rec.outcome} "
                 f"reason={rec.reason} plies={rec.plies}"]
        lines += [f"ply={i} move={m}" for i, m in enumerate(rec.moves)]
        (out / f"{name}-game-{rec.index:03d}.log").write_text(
            "\n".join(lines) + "\n")
    (out / f"{name}-summary.txt").write_text(report(result, "text", name))
    (out / f"{name}-summary.csv").write_text(report(result, "csv", name))
    (out / f"{name}-result.log").write_text(
        result.canonical_bytes().decode())


# ---- experiment presets ----

def desk_config(**overrides) -> EngineConfig:
    """Default play config shrunk to desk scale for the experiments."""
    base = EngineConfig(population_size=20, generations=10, depth=1,
                        mix_white=5, mix_black=5)
    return dataclasses.replace(base, **overrides)


# Per-bit rate for the crossover contrast, matching the millirate levels
# the operator experiments ran at. At the 0.04 play rate mutation alone
# covers the two-gene search space and the crossover effect drowns.
_OPERATOR_MUTATION = 0.004


def _spec(cfg_a, cfg_b, games, seed_base, max_plies=200):
    return MatchSpec(cfg_a, cfg_b, games=games, seed_base=seed_base,
                     max_plies=max_plies)


def _paper_suite(games, seed_base):
    # the two sides of row one both perform 4000 mixed evaluations per
    # move: 20x20 combinations over 10 generations vs 10x10 over 40
    full_20 = desk_config(population_size=20, generations=10,
                          mix_white=20, mix_black=20)
    full_10 = desk_config(population_size=10, generations=40,
                          mix_white=10, mix_black=10)
    return [
        ("pop20xgen10-vs-pop10xgen40",
         _spec(full_20, full_10, games, seed_base)),
        ("depth0-vs-depth1",
         _spec(desk_config(depth=0), desk_config(depth=1), games, seed_base)),
        ("crossover-on-vs-off",
         _spec(desk_config(mutation_prob_per_bit=_OPERATOR_MUTATION),
               desk_config(mutation_prob_per_bit=_OPERATOR_MUTATION,
                           crossover_prob=0.0),
               games, seed_base)),
        ("uniform20-vs-uniform40",
         _spec(desk_config(uniform_level=0.2), desk_config(uniform_level=0.4),
               games, seed_base)),
        ("mutation-on-vs-off",
         _spec(desk_config(), desk_config(mutation_prob_per_bit=0.0),
               games, seed_base)),
        ("mutation2-vs-mutation4",
         _spec(desk_config(mutation_prob_per_bit=0.002),
               desk_config(mutation_prob_per_bit=0.004), games, seed_base)),
        ("mutation4-vs-inversion",
         _spec(desk_config(mutation_prob_per_bit=0.004),
               desk_config(mutation_prob_per_bit=0.004, inversion_enabled=True),
               games, seed_base)),
    ]


def _single(name, cfg_a, cfg_b):
    def build(games, seed_base):
        return [(name, _spec(cfg_a, cfg_b, games, seed_base))]
    return build


_PRESETS = {
    "paper-suite": _paper_suite,
    "self-play": _single("self-play", desk_config(), desk_config()),
    "crossover": _single(
        "crossover-on-vs-off",
        desk_config(mutation_prob_per_bit=_OPERATOR_MUTATION),
        desk_config(mutation_prob_per_bit=_OPERATOR_MUTATION,
                    crossover_prob=0.0)),
    "mutation": _single("mutation-on-vs-off", desk_config(),
                        desk_config(mutation_prob_per_bit=0.0)),
}

PRESET_NAMES = tuple(_PRESETS)


def preset_rows(name: str, games: int, seed_base: int):
    """Named (row name, MatchSpec) pairs for a bundled preset."""
    try:
        build = _PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}") from None
    return build(games, seed_base)
