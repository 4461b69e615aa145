"""Command-line front door.

Machine-readable output goes to stdout, diagnostics to stderr. Exit codes:
0 success, 2 flag/validation error, 1 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import adaptive, benchmark, maze as maze_mod, qubo, samplers, service

DEFAULTS = {
    "lambda1": 2.0,
    "lambda2": 2.0,
    "lambda_update1": 0.15,
    "lambda_update2": 0.30,
    "a": 0.05,
    "sweeps": 1000,
    "reads": 1000,
    "set_size": 30,
}


def _common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=None, help="RNG seed (reproducible output)")
    sub.add_argument("--out", type=Path, default=None, help="write output to this file")
    fmt = sub.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="as_json", action="store_true", help="JSON output")
    fmt.add_argument("--ascii", dest="as_json", action="store_false", help="ASCII output")
    sub.set_defaults(as_json=False)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmaze", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    gen = subs.add_parser("generate", help="generate one maze")
    gen.add_argument(
        "--algo",
        choices=["bar", "wall", "hunt", "qubo-sa", "qubo-sqa"],
        default="qubo-sa",
    )
    gen.add_argument("--n", type=int, default=9)
    gen.add_argument("--lambda1", type=float, default=DEFAULTS["lambda1"])
    gen.add_argument("--lambda2", type=float, default=DEFAULTS["lambda2"])
    gen.add_argument("--sweeps", type=int, default=DEFAULTS["sweeps"])
    gen.add_argument("--reads", type=int, default=DEFAULTS["reads"])
    _common_flags(gen)

    val = subs.add_parser("validate", help="check a maze JSON file for perfectness")
    val.add_argument("--in", dest="infile", type=Path, required=True)
    _common_flags(val)

    sol = subs.add_parser("solve", help="print the shortest start-goal path")
    sol.add_argument("--in", dest="infile", type=Path, required=True)
    _common_flags(sol)

    ben = subs.add_parser("bench", help="scaling benchmark over solvers and sizes")
    ben.add_argument("--solvers", default="classic-bar", help="comma list, e.g. classic-bar,sa")
    ben.add_argument("--n-range", default="2:10", help="inclusive lo:hi[:step]")
    ben.add_argument("--reps", type=int, default=5)
    ben.add_argument("--csv", type=Path, default=None, help="write the CSV here")
    ben.add_argument("--sweeps", type=int, default=DEFAULTS["sweeps"])
    ben.add_argument("--reads", type=int, default=100)
    _common_flags(ben)

    fit = subs.add_parser("fit", help="least-squares polynomial fit of a bench CSV")
    fit.add_argument("--in", dest="infile", type=Path, required=True)
    fit.add_argument("--degree", type=int, default=2, choices=[1, 2])
    fit.add_argument("--solver", default=None, help="row filter when the CSV has several solvers")
    fit.add_argument("--column", default="mean_seconds", choices=["mean_seconds", "tts_seconds"])
    _common_flags(fit)

    bot = subs.add_parser("bot-run", help="scripted subject plays a full maze set")
    bot.add_argument("--n", type=int, default=9)
    bot.add_argument("--mazes", type=int, default=DEFAULTS["set_size"])
    upd = bot.add_mutually_exclusive_group()
    upd.add_argument("--update", dest="update_enabled", action="store_true")
    upd.add_argument("--no-update", dest="update_enabled", action="store_false")
    bot.set_defaults(update_enabled=True)
    bot.add_argument("--profile", default="", help="bot profile, e.g. c=0.1,sigma=0.5,min=0.1")
    bot.add_argument("--sweeps", type=int, default=DEFAULTS["sweeps"])
    bot.add_argument("--reads", type=int, default=100)
    _common_flags(bot)

    srv = subs.add_parser("serve", help="run the HTTP session service")
    srv.add_argument("--addr", default=os.environ.get("QMAZE_ADDR", "127.0.0.1:8000"))
    srv.add_argument("--data-dir", type=Path, default=os.environ.get("QMAZE_DATA_DIR"))
    srv.add_argument("--ui-dir", type=Path, default=None, help="static files to serve at /")
    _common_flags(srv)

    exp = subs.add_parser("export-qubo", help="write the base QUBO in COO text form")
    exp.add_argument("--n", type=int, required=True)
    exp.add_argument("--lambda1", type=float, default=DEFAULTS["lambda1"])
    exp.add_argument("--lambda2", type=float, default=DEFAULTS["lambda2"])
    _common_flags(exp)

    return parser


def _emit(text: str, out: Path | None) -> None:
    if out is not None:
        out.write_text(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _parse_n_range(text: str) -> list:
    parts = [int(p) for p in text.split(":")]
    if len(parts) == 1:
        return parts
    lo, hi = parts[0], parts[1]
    step = parts[2] if len(parts) > 2 else 1
    if step < 1 or hi < lo:
        raise ValueError(f"bad n range {text!r}")
    return list(range(lo, hi + 1, step))


def _parse_profile(text: str) -> service.BotProfile:
    profile = service.BotProfile()
    if not text:
        return profile
    keys = {"c": "seconds_per_cell", "sigma": "noise_sigma", "min": "min_time"}
    for item in text.split(","):
        key, _, value = item.partition("=")
        if key not in keys:
            raise ValueError(f"unknown profile key {key!r}; expected c, sigma, min")
        setattr(profile, keys[key], float(value))
    return profile


def _cmd_generate(args) -> int:
    if args.n < 1:
        raise ValueError("--n must be >= 1")
    if args.algo in ("bar", "wall", "hunt"):
        gen = {
            "bar": maze_mod.generate_bar_tipping,
            "wall": maze_mod.generate_wall_extending,
            "hunt": maze_mod.generate_hunt_and_kill,
        }[args.algo]
        maze = gen(args.n, seed=args.seed)
    else:
        q = qubo.build_base_qubo(args.n, args.lambda1, args.lambda2)
        sampler = samplers.sample_sa if args.algo == "qubo-sa" else samplers.sample_sqa
        seeds = np.random.SeedSequence(args.seed).spawn(2)
        params = samplers.AnnealParams(
            sweeps=args.sweeps,
            reads=args.reads,
            seed=int(np.random.default_rng(seeds[0]).integers(2**63)),
        )
        assignment = samplers.best_feasible(sampler(q, params), q)
        maze = maze_mod.assignment_to_maze(assignment, seed=seeds[1])
    if args.as_json:
        _emit(json.dumps(maze.to_json()), args.out)
    else:
        _emit(maze_mod.render_ascii(maze), args.out)
    return 0


def _load_maze(path: Path) -> maze_mod.Maze:
    text = path.read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return maze_mod.Maze.from_json(json.loads(text))
    return maze_mod.parse_ascii(text)


def _cmd_validate(args) -> int:
    report = maze_mod.validate_perfect(_load_maze(args.infile))
    if args.as_json:
        _emit(
            json.dumps(
                {
                    "perfect": report.is_perfect,
                    "connected": report.connected,
                    "path_cells": report.path_cell_count,
                    "edges": report.edge_count,
                    "violations": report.violations,
                }
            ),
            args.out,
        )
    else:
        lines = [f"perfect: {str(report.is_perfect).lower()}"]
        lines += [f"violation: {v}" for v in report.violations]
        _emit("\n".join(lines), args.out)
    return 0


def _cmd_solve(args) -> int:
    path = maze_mod.solve_shortest_path(_load_maze(args.infile))
    if args.as_json:
        _emit(json.dumps([[r, c] for r, c in path]), args.out)
    else:
        _emit("\n".join(f"{r},{c}" for r, c in path), args.out)
    return 0


def _cmd_bench(args) -> int:
    config = benchmark.BenchConfig(
        solvers=[s.strip() for s in args.solvers.split(",") if s.strip()],
        sizes=_parse_n_range(args.n_range),
        reps=args.reps,
        seed=args.seed,
        sweeps=args.sweeps,
        reads=args.reads,
    )
    rows = benchmark.run_scaling_bench(config)
    text = benchmark.rows_to_csv(rows)
    if args.csv is not None:
        args.csv.write_text(text)
        print(f"wrote {len(rows)} rows to {args.csv}", file=sys.stderr)
    else:
        _emit(text, args.out)
    return 0


def _cmd_fit(args) -> int:
    rows = benchmark.rows_from_csv(args.infile.read_text())
    solvers = sorted({r.solver for r in rows})
    if args.solver is not None:
        rows = [r for r in rows if r.solver == args.solver]
    elif len(solvers) > 1:
        raise ValueError(f"CSV holds solvers {solvers}; pick one with --solver")
    if not rows:
        raise ValueError("no rows to fit")
    xs = [r.n for r in rows]
    ys = [getattr(r, args.column) for r in rows]
    if any(y is None for y in ys):
        raise ValueError(f"column {args.column} has empty cells for this solver")
    fit = benchmark.fit_poly(xs, ys, args.degree)
    _emit(json.dumps(benchmark.fit_to_json(fit)), args.out)
    return 0


def _cmd_bot_run(args) -> int:
    if args.n < 1 or args.mazes < 1:
        raise ValueError("--n and --mazes must be >= 1")
    params = service.SessionParams(
        n=args.n,
        update_enabled=args.update_enabled,
        set_size=args.mazes,
        sweeps=args.sweeps,
        reads=args.reads,
    )
    stats = service.run_bot_set(
        n=args.n, params=params, profile=_parse_profile(args.profile), seed=args.seed
    )
    _emit(json.dumps(stats), args.out)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    host, _, port = args.addr.partition(":")
    store = service.SessionStore(args.data_dir)
    app = service.create_app(store, ui_dir=args.ui_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))
    return 0


def _cmd_export_qubo(args) -> int:
    if args.n < 1:
        raise ValueError("--n must be >= 1")
    q = qubo.build_base_qubo(args.n, args.lambda1, args.lambda2)
    _emit(qubo.export_coo(q), args.out)
    return 0


COMMANDS = {
    "generate": _cmd_generate,
    "validate": _cmd_validate,
    "solve": _cmd_solve,
    "bench": _cmd_bench,
    "fit": _cmd_fit,
    "bot-run": _cmd_bot_run,
    "serve": _cmd_serve,
    "export-qubo": _cmd_export_qubo,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ValueError, benchmark.TooShortError, benchmark.SingularFitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
