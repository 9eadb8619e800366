"""Command line entry points: play, eval, bench, serve."""

import dataclasses
import json
import sys
from pathlib import Path

import click

from .board import (WHITE, IllegalMoveError, ParseError, board_from_fen,
                    to_fen)
from .engine import EngineConfig
from .evaluation import evaluate_board, game_stage
from .harness import preset_rows, report_suite, run_series, write_series_logs
from .service import FINISHED, GameSession, color_name, parse_color
from .tables import load_score_tables

_PIECE_CHARS = "PRNBQK"


def render_board(board) -> str:
    rows = []
    for rank in range(7, -1, -1):
        cells = []
        for file in range(8):
            p = board.placement[rank * 8 + file]
            if p < 0:
                cells.append(".")
            else:
                ch = _PIECE_CHARS[(p >> 4) & 7]
                cells.append(ch if p >> 7 == WHITE else ch.lower())
        rows.append(f"{rank + 1}  " + " ".join(cells))
    rows.append("   a b c d e f g h")
    return "\n".join(rows)


def _load_config(config_path, seed) -> EngineConfig:
    if config_path is not None:
        data = json.loads(Path(config_path).read_text())
        config = EngineConfig(**data)
    else:
        config = EngineConfig()
    if seed is not None:
        config = dataclasses.replace(config, rng_seed=seed)
    return config


def _load_tables(tables_path):
    return load_score_tables(tables_path) if tables_path else None


@click.group()
def main():
    """Chess player driven by two co-evolving populations."""


@main.command()
@click.option("--human", default="white",
              type=click.Choice(["white", "black"]), show_default=True,
              help="Color the human plays.")
@click.option("--config", "config_path", type=click.Path(exists=True),
              help="JSON file of engine config fields.")
@click.option("--seed", type=int, default=None, help="Engine rng seed.")
@click.option("--tables", "tables_path", type=click.Path(exists=True),
              help="Score table file overriding the bundled one.")
@click.option("--log-file", type=click.Path(), default=None,
              help="Append the game to this replayable log.")
def play(human, config_path, seed, tables_path, log_file):
    """Play against the engine in the terminal."""
    config = _load_config(config_path, seed)
    session = GameSession("cli", config, parse_color(human),
                          tables=_load_tables(tables_path),
                          log_path=log_file, sync=True)
    out = click.get_text_stream("stdout")
    shown = 0
    while True:
        for entry in session.move_log[shown:]:
            if entry.mover == "engine":
                out.write(f"engine plays {entry.move}\n")
        shown = len(session.move_log)
        out.write(render_board(session.board) + "\n")
        if session.status == FINISHED:
            term = session.termination
            winner = ("tie" if term.winner is None
                      else f"{color_name(term.winner)} wins")
            out.write(f"game over: {term.outcome} ({winner})\n")
            return
        line = click.prompt("your move", default="", show_default=False)
        if line.strip().lower() == "resign":
            session.resign()
            continue
        if line.strip().lower() in ("", "quit", "exit"):
            out.write("bye\n")
            return
        try:
            session.submit_human_move(line)
        except (ParseError, IllegalMoveError) as exc:
            out.write(f"rejected: {exc}\n")


@main.command("eval")
@click.option("--fen", required=True, help="Position, standard or extended FEN.")
@click.option("--tables", "tables_path", type=click.Path(exists=True))
def eval_position(fen, tables_path):
    """Print the static evaluation of a position."""
    try:
        board = board_from_fen(fen)
    except ParseError as exc:
        raise click.ClickException(str(exc))
    tables = _load_tables(tables_path)
    breakdown = evaluate_board(board, board.side, tables)
    click.echo(render_board(board))
    click.echo(f"side to move: {color_name(board.side)}  "
               f"stage: {game_stage(board)}")
    for name, value in breakdown.nets().items():
        click.echo(f"{name:>9}: {value:+d}")
    click.echo(f"{'total':>9}: {breakdown.total:+d}")


@main.command()
@click.option("--preset", default="self-play", show_default=True)
@click.option("--games", default=20, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", type=click.Path(), default=None,
              help="Directory for per-game logs and summaries.")
@click.option("--workers", default=1, show_default=True)
@click.option("--format", "fmt", default="text",
              type=click.Choice(["text", "csv"]), show_default=True)
def bench(preset, games, seed, out_dir, workers, fmt):
    """Run a bundled experiment preset and print the summary table."""
    try:
        rows = preset_rows(preset, games, seed)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    results = []
    for name, spec in rows:
        result = run_series(spec, workers=workers)
        results.append((name, result))
        if out_dir is not None:
            write_series_logs(result, out_dir, name=name)
        click.echo(f"# {name}: a={result.wins_a} b={result.wins_b} "
                   f"ties={result.ties} cutoffs={result.cutoffs}", err=True)
    table = report_suite(results, fmt)
    if out_dir is not None:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
        (Path(out_dir) / f"summary.{ 'csv' if fmt == 'csv' else 'txt' }").write_text(table)
    click.echo(table, nl=False)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--log-dir", type=click.Path(), default=None,
              help="Directory for session logs; enables crash recovery.")
@click.option("--tables", "tables_path", type=click.Path(exists=True))
def serve(host, port, log_dir, tables_path):
    """Run the local game service for the browser UI."""
    from .service import SessionManager
    from .webapi import serve as run_server

    manager = SessionManager(log_dir=log_dir, sync=False,
                             tables=_load_tables(tables_path))
    recovered = manager.recover()
    if recovered:
        click.echo(f"recovered sessions: {', '.join(recovered)}", err=True)
    click.echo(f"serving on http://{host}:{port}/v1", err=True)
    run_server(manager, host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
