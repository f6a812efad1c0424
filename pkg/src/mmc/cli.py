"""Command line front end.

    mmc gen -p 10 -q 10 -r 0.2 --seed 7 -o inst.mmc
    mmc solve inst.mmc --algo greedy
    mmc export-lp inst.mmc -o inst.lp --check
    mmc reduce-clique graph.col -o red.mmc
    mmc bench --sizes 5 10 --reps 50 --format md

Exit codes: 0 success, 1 failed check, 2 usage or input error, 3 guard refusal.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench as B
from .core import BinaryMatrix
from .errors import GuardError, MMCError
from .heuristics import ALGORITHMS
from .ilp import build_model, check_model, lp_text
from .instances import from_clique, parse_graph, parse_instance, random_instance, serialize_instance
from .solvers import CSV_HEADER, exact_solve, naive_enumerate

EXIT_FAILED, EXIT_USAGE, EXIT_GUARD = 1, 2, 3

SOLVERS = ("lcl", "greedy", "neigh", "exact", "naive")


class _Usage(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def render(M: BinaryMatrix) -> str:
    return "".join("".join("o" if v else "." for v in row) + "\n" for row in M.entries.tolist())


def cmd_gen(args) -> int:
    M = random_instance(args.p, args.q if args.q is not None else args.p, args.r, args.seed)
    _emit(serialize_instance(M), args.output)
    if args.output:
        Path(args.output + ".meta.json").write_text(json.dumps(M.meta, sort_keys=True) + "\n")
    return 0


def cmd_solve(args) -> int:
    M = parse_instance(_read(args.instance))
    M.meta["source"] = args.instance
    if args.algo == "exact":
        report = exact_solve(M, budget=args.budget)
    elif args.algo == "naive":
        report = naive_enumerate(M, force=args.force)
    else:
        report = ALGORITHMS[args.algo](M)
    print(CSV_HEADER)
    print(report.csv_row())
    sys.stdout.write(report.selection.to_text())
    if not report.certified:
        print("# time budget exhausted: best found, not proven optimal")
    sys.stdout.write(render(report.result))
    return 0


def cmd_export_lp(args) -> int:
    M = parse_instance(_read(args.instance))
    model = build_model(M)
    _emit(lp_text(model), args.output)
    if args.check:
        ok = check_model(model, M)
        print(f"formulation check: {'passed' if ok else 'FAILED'}", file=sys.stderr)
        return 0 if ok else EXIT_FAILED
    return 0


def cmd_reduce_clique(args) -> int:
    layout = from_clique(parse_graph(_read(args.graph)))
    _emit(serialize_instance(layout.matrix), args.output)
    print(f"d0={layout.d0}", file=sys.stderr)
    return 0


def cmd_bench(args) -> int:
    cfg = B.BenchConfig(
        sizes=args.sizes,
        probabilities=args.probs,
        repetitions=args.reps,
        algorithms=tuple(args.algos),
        seed=args.seed,
        budget=None if args.no_budget else args.budget,
        preprocess=not args.no_preprocess,
    )
    results = B.run_instances(cfg, workers=args.workers)
    cells = B.aggregate(cfg, results)
    fmt = B.to_markdown if args.format == "md" else B.to_csv
    text = fmt(B.cell_columns(cfg, args.timing), B.cell_rows(cfg, cells, args.timing))
    if args.h2h and len(cfg.heuristics) > 1:
        text += "\n" + fmt(*B.wins_table(cfg.heuristics, B.head_to_head(cfg.heuristics, results)))
    _emit(text, args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mmc", description="Maximum matrix contraction toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a seeded random instance")
    g.add_argument("-p", type=int, required=True)
    g.add_argument("-q", type=int)
    g.add_argument("-r", type=float, required=True, help="probability of a 1")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="solve one instance and print a CSV row")
    s.add_argument("instance")
    s.add_argument("--algo", choices=SOLVERS, default="lcl")
    s.add_argument("--budget", type=float, help="seconds for --algo exact")
    s.add_argument("--force", action="store_true", help="lift the size guard of --algo naive")
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("export-lp", help="write the integer program in LP format")
    e.add_argument("instance")
    e.add_argument("-o", "--output")
    e.add_argument("--check", action="store_true", help="verify the model against direct contraction")
    e.set_defaults(func=cmd_export_lp)

    r = sub.add_parser("reduce-clique", help="build the matrix of a maximum-clique instance")
    r.add_argument("graph")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_reduce_clique)

    b = sub.add_parser("bench", help="heuristics versus exact on random squares")
    b.add_argument("--sizes", type=int, nargs="+", default=[5, 10])
    b.add_argument("--probs", type=float, nargs="+", default=list(B.DEFAULT_PROBABILITIES))
    b.add_argument("--reps", type=int, default=50)
    b.add_argument("--algos", nargs="+", choices=B.ALL_ALGORITHMS, default=list(B.ALL_ALGORITHMS))
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--budget", type=float, default=60.0, help="seconds per exact run")
    b.add_argument("--no-budget", action="store_true")
    b.add_argument("--no-preprocess", action="store_true", help="keep empty lines and columns")
    b.add_argument("--timing", action="store_true", help="add wall-time columns (not reproducible)")
    b.add_argument("--h2h", action="store_true", help="append the strictly-better win table")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--format", choices=("csv", "md"), default="csv")
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GuardError as exc:
        print(f"mmc: refused: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (_Usage, MMCError, ValueError) as exc:
        print(f"mmc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
