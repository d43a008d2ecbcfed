"""Command-line entry point.

Subcommands: perft, play, evolve, tournament, serve, eval-pos.  Output files
land under --out (or $DRAGONFISH_OUT); stdout is machine-parseable
tab-separated text unless --pretty is given.  Exit codes: 0 ok, 2 usage,
3 bad data or domain error, 4 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .board import from_dpn, initial_position, to_dpn
from .errors import DataError, DomainError, DragonfishError
from .evaluation import evaluate, identity_theta, load_theta, save_theta
from .movegen import perft
from .presets import PRESET_FILES, preset_theta
from .search import AgentConfig, minimax_agent, play_game, random_agent
from .seeding import derive_seed

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_RUNTIME = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 2 on usage errors, like argparse, but explicit
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dragonfish", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_shared(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--depth", type=int, default=None, help="search depth cap")
        p.add_argument("--time-ms", type=int, default=None, help="per-move wall-clock budget")
        p.add_argument("--theta", default=None, help="theta file or preset name")
        p.add_argument("--out", default=None, help="output directory (default $DRAGONFISH_OUT or ./out)")
        p.add_argument("--jobs", type=int, default=0, help="parallel workers (0 = all cores)")
        p.add_argument("--pretty", action="store_true", help="human-readable output")

    p = sub.add_parser("perft", help="legal-move tree leaf counts from a position")
    add_shared(p)
    p.add_argument("--dpn", default=None, help="DPN file (default: initial position)")

    p = sub.add_parser("play", help="play one seeded game between two agents")
    add_shared(p)
    p.add_argument("--gold", default="minimax", help="random | minimax | minimax@<theta>")
    p.add_argument("--scarlet", default="random")

    p = sub.add_parser("evolve", help="CMA-ES evolution of the 25 heuristic weights")
    add_shared(p)
    p.add_argument("--generations", type=int, default=10)
    p.add_argument("--lambda", dest="lam", type=int, default=None, help="population size")
    p.add_argument("--games-per-candidate", type=int, default=4)
    p.add_argument("--checkpoint", default=None, help="checkpoint file (default <out>/checkpoint.json)")

    p = sub.add_parser("tournament", help="Swiss tournament with Elo reporting")
    add_shared(p)
    p.add_argument("--rounds", type=int, default=50)
    p.add_argument("--entrants", default=None, help="JSON entrant config file (default: the 8-agent field)")

    p = sub.add_parser("serve", help="host the HTTP game service")
    add_shared(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    p = sub.add_parser("eval-pos", help="evaluation breakdown of a DPN position")
    add_shared(p)
    p.add_argument("--dpn", default=None, help="DPN file, '-' for stdin (default: initial position)")

    return parser


def _out_dir(args) -> Path:
    out = args.out or os.environ.get("DRAGONFISH_OUT") or "out"
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _jobs(args) -> int:
    if args.jobs and args.jobs > 0:
        return args.jobs
    return os.cpu_count() or 1


def _resolve_theta(value):
    if value is None:
        return None
    if value.lower() in PRESET_FILES:
        return preset_theta(value)
    return load_theta(value)


def _read_position(args):
    if getattr(args, "dpn", None) in (None, ""):
        return initial_position()
    if args.dpn == "-":
        return from_dpn(sys.stdin.read())
    return from_dpn(Path(args.dpn).read_text())


def _agent_from_spec(spec: str, args, default_seed: int) -> AgentConfig:
    spec = spec.strip()
    if spec == "random":
        return random_agent(seed=default_seed, label=f"random[{default_seed}]")
    name, _, theta_ref = spec.partition("@")
    if name != "minimax":
        raise DataError(f"bad agent spec {spec!r} (random | minimax | minimax@<theta>)")
    theta = _resolve_theta(theta_ref) if theta_ref else _resolve_theta(args.theta)
    theta_name = theta_ref or (args.theta or "identity")
    depth = args.depth
    time_ms = args.time_ms
    if depth is None and time_ms is None:
        depth = 2
    return minimax_agent(
        depth=depth, theta=theta, theta_name=theta_name,
        time_budget_ms=time_ms, seed=default_seed,
    )


def cmd_perft(args) -> int:
    position = _read_position(args)
    depth = args.depth if args.depth is not None else 3
    for d in range(depth + 1):
        nodes = perft(position, d)
        if args.pretty:
            print(f"perft({d}) = {nodes}")
        else:
            print(f"{d}\t{nodes}")
    return EXIT_OK


def cmd_play(args) -> int:
    gold = _agent_from_spec(args.gold, args, derive_seed(args.seed, "gold"))
    scarlet = _agent_from_spec(args.scarlet, args, derive_seed(args.seed, "scarlet"))
    result, record = play_game(gold, scarlet, seed=args.seed)
    out = _out_dir(args)
    path = out / f"play_seed{args.seed}.rec"
    record.save(path)
    if args.pretty:
        print(f"{gold.label} vs {scarlet.label}: {result.value} in {record.ply_count} plies")
        print(f"record: {path}")
    else:
        print(f"result\t{result.value}")
        print(f"plies\t{record.ply_count}")
        print(f"record\t{path}")
    return EXIT_OK


def cmd_eval_pos(args) -> int:
    position = _read_position(args)
    theta = _resolve_theta(args.theta)
    breakdown = evaluate(position, theta if theta is not None else identity_theta())
    if args.pretty:
        for name, value in breakdown.components.items():
            print(f"{name:>18}: {value:10.2f}")
        print(f"{'total':>18}: {breakdown.total:10.2f}")
    else:
        for name, value in breakdown.components.items():
            print(f"{name}\t{value!r}")
        print(f"total\t{breakdown.total!r}")
    return EXIT_OK


def cmd_evolve(args) -> int:
    from .cmaes import FitnessSpec, run_evolution

    depth = args.depth if args.depth is not None else 2
    spec = FitnessSpec(
        opponents=[
            random_agent(seed=1, label="random-pool"),
            minimax_agent(depth=depth, theta_name="identity", label="identity-pool"),
        ],
        games_per_opponent=args.games_per_candidate,
        depth=depth,
    )
    out = _out_dir(args)
    checkpoint = Path(args.checkpoint) if args.checkpoint else out / "checkpoint.json"
    initial = _resolve_theta(args.theta)

    def progress(entry):
        line = (
            f"{entry.generation}\t{entry.best_fitness:.4f}\t{entry.mean_fitness:.4f}"
            f"\t{entry.best_ever:.4f}\t{entry.sigma:.5f}"
        )
        print(line, flush=True)

    if args.pretty:
        print("generation\tbest\tmean\tbest_ever\tsigma")
    result = run_evolution(
        initial_theta=initial,
        spec=spec,
        generations=args.generations,
        seed=args.seed,
        lam=args.lam,
        checkpoint_path=checkpoint,
        jobs=_jobs(args),
        progress=progress,
    )
    theta_path = out / "best.theta"
    save_theta(result.best_theta, theta_path)
    history_path = out / "history.tsv"
    lines = ["generation\tbest_fitness\tmean_fitness\tbest_ever\tsigma"]
    for entry in result.history:
        lines.append(
            f"{entry.generation}\t{entry.best_fitness!r}\t{entry.mean_fitness!r}"
            f"\t{entry.best_ever!r}\t{entry.sigma!r}"
        )
    history_path.write_text("\n".join(lines) + "\n")
    print(f"best_fitness\t{result.best_fitness!r}")
    print(f"theta\t{theta_path}")
    print(f"checkpoint\t{checkpoint}")
    print(f"history\t{history_path}")
    return EXIT_OK


def default_entrants(args) -> list[tuple[str, AgentConfig]]:
    """The Table-1-shaped 8-agent field: evolved weights (via --theta, else
    identity), the direct-transfer baseline, both presets, four randoms."""
    depth = args.depth
    time_ms = args.time_ms
    if depth is None and time_ms is None:
        depth = 2

    def mk(theta, name):
        return minimax_agent(
            depth=depth, theta=theta, theta_name=name, time_budget_ms=time_ms, label=name
        )

    post_theta = _resolve_theta(args.theta)
    return [
        ("dragonfish-post", mk(post_theta if post_theta is not None else identity_theta(), "dragonfish-post")),
        ("dragonfish-pre", mk(identity_theta(), "dragonfish-pre")),
        ("gygax-minimax", mk(preset_theta("gygax"), "gygax")),
        ("jackman-minimax", mk(preset_theta("jackman"), "jackman")),
        ("random-1", random_agent(seed=101, label="random-1")),
        ("random-2", random_agent(seed=102, label="random-2")),
        ("random-3", random_agent(seed=103, label="random-3")),
        ("random-4", random_agent(seed=104, label="random-4")),
    ]


def entrants_from_file(path: str, args) -> list[tuple[str, AgentConfig]]:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DataError(f"entrants file is not valid JSON: {exc}") from exc
    if not isinstance(raw, list) or not raw:
        raise DataError("entrants file must be a non-empty JSON list")
    entrants = []
    for i, item in enumerate(raw):
        name = item.get("name", f"agent-{i}")
        kind = item.get("kind", "minimax")
        seed = int(item.get("seed", i))
        if kind == "random":
            entrants.append((name, random_agent(seed=seed, label=name)))
            continue
        if kind != "minimax":
            raise DataError(f"entrant {name!r}: unknown kind {kind!r}")
        theta_ref = item.get("theta")
        theta = _resolve_theta(theta_ref) if theta_ref else None
        depth = item.get("depth", args.depth)
        time_ms = item.get("time_ms", args.time_ms)
        if depth is None and time_ms is None:
            depth = 2
        entrants.append(
            (
                name,
                minimax_agent(
                    depth=depth,
                    theta=theta,
                    theta_name=theta_ref or "identity",
                    time_budget_ms=time_ms,
                    seed=seed,
                    label=name,
                ),
            )
        )
    return entrants


def cmd_tournament(args) -> int:
    from .tournament import run_tournament, standings_pretty, standings_table

    entrants = (
        entrants_from_file(args.entrants, args) if args.entrants else default_entrants(args)
    )
    out = _out_dir(args)
    games_dir = out / "games"
    games_dir.mkdir(exist_ok=True)
    state = run_tournament(
        entrants, rounds=args.rounds, seed=args.seed, jobs=_jobs(args), record_dir=games_dir
    )
    table = standings_table(state)
    standings_path = out / "standings.tsv"
    standings_path.write_text(table)
    print(standings_pretty(state) if args.pretty else table, end="")
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import serve

    serve(host=args.host, port=args.port)
    return EXIT_OK


COMMANDS = {
    "perft": cmd_perft,
    "play": cmd_play,
    "evolve": cmd_evolve,
    "tournament": cmd_tournament,
    "serve": cmd_serve,
    "eval-pos": cmd_eval_pos,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (DataError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DragonfishError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
