"""Co-evolutionary move search.

Two populations of move-sequence chromosomes, one per color, evolve
against each other while the engine thinks about a single position.
Each generation both populations are scored by an opponent-free playout
(own genes applied in order, opponent plies skipped), the P best white
and Q best black chromosomes are interleaved into P*Q mixed chromosomes,
and every mixed chromosome is scored by ``evaluate_mixed``.  The move
played is the decoded first gene of the engine-side chromosome inside
the best mixed chromosome seen during the whole deliberation.

Between two successive deliberations of the same game the populations
carry over: every chromosome drops gene 0, appends a fresh random gene,
and is repaired against the new position.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .board import BLACK, WHITE, Board, Move, format_move
from .evaluation import PlayoutCache, evaluate_board, evaluate_mixed
from .genome import (
    Chromosome,
    NoLegalMoveError,
    VariationConfig,
    decode,
    is_encodable,
    mutate,
    parse_genes,
    random_chromosome,
    random_gene,
    repair,
    uniform_crossover,
)
from .tables import ScoreTables, default_tables


@dataclass(frozen=True)
class EngineConfig:
    """Knobs for one engine instance.

    ``mix_white`` / ``mix_black`` are the P and Q mix fan-outs: how many
    top chromosomes of each population enter the mixing stage.  Setting
    both to ``population_size`` gives the full K x K combination.
    ``time_budget`` (seconds) cuts deliberation at a generation boundary;
    the first generation always completes so a move is always available.
    """

    population_size: int = 100
    generations: int = 20
    depth: int = 4
    crossover_prob: float = 0.7
    uniform_level: float = 0.2
    mutation_prob_per_bit: float = 0.04
    inversion_enabled: bool = False
    elitism_count: int = 2
    mix_white: int = 10
    mix_black: int = 10
    fitness_mode: str = "sum"
    rng_seed: int | None = None
    skip_penalty: int = -50
    time_budget: float | None = None

    def __post_init__(self):
        if self.population_size < 1:
            raise ValueError("population_size must be at least 1")
        if self.generations < 1:
            raise ValueError("generations must be at least 1")
        if self.depth < 0:
            raise ValueError("depth must be non-negative")
        if not 0 <= self.elitism_count <= self.population_size:
            raise ValueError("elitism_count must be in [0, population_size]")
        for name in ("mix_white", "mix_black"):
            v = getattr(self, name)
            if not 1 <= v <= self.population_size:
                raise ValueError(f"{name} must be in [1, population_size]")
        if self.fitness_mode not in ("sum", "last_move"):
            raise ValueError(f"unknown fitness mode {self.fitness_mode!r}")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ValueError("time_budget must be positive or None")
        self.variation()  # rejects out-of-range probabilities

    def variation(self) -> VariationConfig:
        return VariationConfig(self.crossover_prob, self.uniform_level,
                               self.mutation_prob_per_bit, self.inversion_enabled)

    @property
    def gene_count(self) -> int:
        return self.depth + 1


@dataclass(frozen=True, slots=True)
class Population:
    """K same-color chromosomes; ``fitness`` aligns with ``members`` once
    the population has been evaluated against a position."""

    color: int
    members: tuple
    fitness: tuple | None = None


@dataclass(frozen=True, slots=True)
class MixedChromosome:
    """Interleaved white/black gene line, engine side first.

    ``source`` is the (white index, black index) of the parent
    chromosomes inside their populations.
    """

    genes: tuple
    source: tuple


@dataclass(slots=True)
class Diagnostics:
    """What one deliberation did; ``lines()`` renders the harness log."""

    generations_run: int = 0
    evaluations: int = 0
    best_fitness: int | None = None
    best_source: tuple | None = None
    best_move_text: str = ""
    per_generation: list = field(default_factory=list)
    elapsed: float = 0.0
    budget_hit: bool = False
    fallback: bool = False

    def lines(self) -> list[str]:
        # wall-clock stays out of here so traces replay byte-identical
        out = []
        for g, mixed_best, w_best, b_best in self.per_generation:
            out.append(f"gen={g} mixed_best={mixed_best} "
                       f"white_best={w_best} black_best={b_best}")
        src = ("none" if self.best_source is None
               else f"{self.best_source[0]},{self.best_source[1]}")
        out.append(f"done generations={self.generations_run} "
                   f"evaluations={self.evaluations} best={self.best_fitness} "
                   f"source={src} move={self.best_move_text} "
                   f"budget_hit={int(self.budget_hit)} "
                   f"fallback={int(self.fallback)}")
        return out


# ---- per-population fitness ----

def chromosome_fitness(chrom: Chromosome, board: Board, cfg: EngineConfig,
                       tables: ScoreTables | None = None,
                       cache: PlayoutCache | None = None) -> int:
    """Opponent-free playout score: the chromosome's own genes applied in
    order with every opponent ply skipped, accumulated like
    ``evaluate_mixed`` under ``cfg.fitness_mode``."""
    tables = tables or default_tables()
    color = chrom.color
    board = _pass(board, cache) if board.side != color else board
    genes = parse_genes(chrom)
    n = chrom.gene_count
    mode = cfg.fitness_mode
    total = 0
    penalties = 0
    for i in range(n):
        if not board.legal_moves():
            if mode == "sum":
                total += _total(board, color, tables, cache) * (n - i)
            break
        move = decode(genes[i], board) if i < len(genes) else None
        if move is None:
            board = _pass(board, cache)
            penalties += cfg.skip_penalty
        else:
            board = _child(board, move, cache)
            if mode == "sum":
                total += _total(board, color, tables, cache)
        board = _pass(board, cache)  # the opponent ply is not simulated
    if mode == "last_move":
        return _total(board, color, tables, cache) + penalties
    return total + penalties


def _pass(board, cache):
    return cache.passed(board) if cache else board.pass_turn()


def _child(board, move, cache):
    return cache.child(board, move) if cache else board.apply_unchecked(move)


def _total(board, perspective, tables, cache):
    if cache is not None:
        return cache.total(board, perspective, tables)
    return evaluate_board(board, perspective, tables).total


def population_fitness(pop: Population, board: Board, cfg: EngineConfig,
                       tables: ScoreTables | None = None,
                       cache: PlayoutCache | None = None,
                       memo: dict | None = None) -> Population:
    """Population with its fitness tuple filled in.  ``memo`` may carry
    (color, bits) -> fitness across generations of one deliberation;
    identical chromosomes replay identical lines."""
    tables = tables or default_tables()
    fits = []
    for c in pop.members:
        if memo is None:
            fits.append(chromosome_fitness(c, board, cfg, tables, cache))
            continue
        key = (c.color, c.bits)
        f = memo.get(key)
        if f is None:
            f = chromosome_fitness(c, board, cfg, tables, cache)
            memo[key] = f
        fits.append(f)
    return Population(pop.color, pop.members, tuple(fits))


# ---- generation machinery ----

def init_populations(board: Board, cfg: EngineConfig,
                     rng: random.Random) -> tuple[Population, Population]:
    """K random repaired chromosomes per color, white drawn first."""
    counts = range(cfg.population_size)
    white = tuple(repair(random_chromosome(WHITE, cfg.gene_count, rng), board, rng)
                  for _ in counts)
    black = tuple(repair(random_chromosome(BLACK, cfg.gene_count, rng), board, rng)
                  for _ in counts)
    return Population(WHITE, white), Population(BLACK, black)


def _roulette_weights(fitness) -> list[float]:
    # shift by (min - 1) so every slice has positive mass
    lo = min(fitness)
    return [f - lo + 1.0 for f in fitness]


def _ranked(fitness) -> list[int]:
    return sorted(range(len(fitness)), key=fitness.__getitem__, reverse=True)


def step_generation(pops, board: Board, cfg: EngineConfig, rng: random.Random,
                    tables: ScoreTables | None = None,
                    cache: PlayoutCache | None = None):
    """One GA step per population, independently: the elitism_count best
    survive unchanged, the rest come from roulette-selected parents
    through crossover, mutation and repair."""
    tables = tables or default_tables()
    vcfg = cfg.variation()
    out = []
    for pop in pops:
        if pop.fitness is None:
            pop = population_fitness(pop, board, cfg, tables, cache)
        members, fitness = pop.members, pop.fitness
        order = _ranked(fitness)
        elites = [members[i] for i in order[:cfg.elitism_count]]
        want = cfg.population_size - len(elites)
        weights = _roulette_weights(fitness)
        children = []
        while len(children) < want:
            pa, pb = rng.choices(members, weights=weights, k=2)
            for child in uniform_crossover(pa, pb, vcfg, rng):
                if len(children) < want:
                    children.append(repair(mutate(child, vcfg, rng), board, rng))
        out.append(Population(pop.color, tuple(elites + children)))
    return tuple(out)


def form_mixed(pops, cfg: EngineConfig, side: int) -> list[MixedChromosome]:
    """P best white crossed with Q best black, genes interleaved with
    ``side`` (the engine's side to move) first."""
    white, black = pops
    if white.fitness is None or black.fitness is None:
        raise ValueError("populations must be evaluated before mixing")
    top_w = [(i, parse_genes(white.members[i]))
             for i in _ranked(white.fitness)[:cfg.mix_white]]
    top_b = [(i, parse_genes(black.members[i]))
             for i in _ranked(black.fitness)[:cfg.mix_black]]
    out = []
    for wi, wg in top_w:
        for bi, bg in top_b:
            first, second = (wg, bg) if side == WHITE else (bg, wg)
            genes = []
            for a, b in zip(first, second):
                genes.append(a)
                genes.append(b)
            out.append(MixedChromosome(tuple(genes), (wi, bi)))
    return out


# ---- deliberation ----

def _deliberate(board, cfg, rng, tables, pops):
    t0 = time.monotonic()
    cache = PlayoutCache()
    memo = {}
    side = board.side
    diag = Diagnostics()
    best = None
    for g in range(cfg.generations):
        if (cfg.time_budget is not None and g > 0
                and time.monotonic() - t0 >= cfg.time_budget):
            diag.budget_hit = True
            break
        pops = (population_fitness(pops[0], board, cfg, tables, cache, memo),
                population_fitness(pops[1], board, cfg, tables, cache, memo))
        mixed = form_mixed(pops, cfg, side)
        gen_best = None
        for m in mixed:
            f = evaluate_mixed(m.genes, board, tables, mode=cfg.fitness_mode,
                               skip_penalty=cfg.skip_penalty, cache=cache)
            diag.evaluations += 1
            if gen_best is None or f > gen_best[0]:
                gen_best = (f, m)
            if best is None or f > best[0]:
                best = (f, m)
        diag.per_generation.append(
            (g, gen_best[0], max(pops[0].fitness), max(pops[1].fitness)))
        diag.generations_run = g + 1
        if g + 1 < cfg.generations:
            pops = step_generation(pops, board, cfg, rng, tables, cache)
    fitness, top = best
    move = decode(top.genes[0], board)
    if move is None:
        if any(is_encodable(m) for m in board.legal_moves()):
            # repair pinned gene 0 to this board; only a bug gets here
            raise RuntimeError("best chromosome's first gene no longer decodes")
        # only surplus promoted pieces can move: the gene language cannot
        # express a move here, but the game demands one
        move = rng.choice(board.legal_moves())
        diag.fallback = True
    diag.best_fitness = fitness
    diag.best_source = top.source
    diag.best_move_text = format_move(move)
    diag.elapsed = time.monotonic() - t0
    return move, diag, pops


def choose_move(board: Board, cfg: EngineConfig,
                rng: random.Random | None = None,
                tables: ScoreTables | None = None) -> tuple[Move, Diagnostics]:
    """Deliberate from scratch on ``board`` and return the chosen move.

    Raises NoLegalMoveError on a terminal position.  With ``rng`` omitted
    a fresh ``random.Random(cfg.rng_seed)`` is used, making the result a
    pure function of (board, cfg).
    """
    if rng is None:
        rng = random.Random(cfg.rng_seed)
    tables = tables or default_tables()
    if not board.legal_moves():
        raise NoLegalMoveError("no legal move at the root position")
    pops = init_populations(board, cfg, rng)
    move, diag, _ = _deliberate(board, cfg, rng, tables, pops)
    return move, diag


def advance_populations(pops, played: Move, opponent_reply: Move | None,
                        board: Board, rng: random.Random):
    """Carry populations over to the position two plies later.

    Every chromosome drops gene 0, appends a fresh random gene, and is
    repaired against ``board`` (the position after ``played`` and
    ``opponent_reply``, which the board already reflects).
    """
    out = []
    for pop in pops:
        members = []
        for c in pop.members:
            bits = []
            for g in parse_genes(c)[1:]:
                bits.extend(g.bits)
            bits.extend(random_gene(pop.color, rng).bits)
            shifted = Chromosome(tuple(bits), pop.color, c.gene_count)
            members.append(repair(shifted, board, rng))
        out.append(Population(pop.color, tuple(members)))
    return tuple(out)


class CoevoEngine:
    """Stateful player for one seat of one game.

    Populations persist between moves: when the presented board is
    exactly two plies past the previous deliberation (our move plus the
    opponent's reply) they are advanced, otherwise rebuilt from scratch.
    Instances are single-deliberation-at-a-time; concurrent games need
    separate instances.
    """

    def __init__(self, color: int, cfg: EngineConfig,
                 tables: ScoreTables | None = None,
                 rng: random.Random | None = None):
        self.color = color
        self.cfg = cfg
        self.tables = tables or default_tables()
        self.rng = rng if rng is not None else random.Random(cfg.rng_seed)
        self._pops = None
        self._last_ply = None

    def select_move(self, board: Board) -> tuple[Move, Diagnostics]:
        if board.side != self.color:
            raise ValueError("not this engine's turn")
        if not board.legal_moves():
            raise NoLegalMoveError("no legal move at the root position")
        if (self._pops is not None and self._last_ply is not None
                and board.ply == self._last_ply + 2 and board.parent is not None):
            played = board.parent.last_move
            self._pops = advance_populations(self._pops, played,
                                             board.last_move, board, self.rng)
        else:
            self._pops = init_populations(board, self.cfg, self.rng)
        move, diag, pops = _deliberate(board, self.cfg, self.rng,
                                       self.tables, self._pops)
        self._pops = pops
        self._last_ply = board.ply
        return move, diag
