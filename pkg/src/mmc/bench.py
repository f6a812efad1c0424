"""Benchmark harness: heuristics against the exact optimum on seeded random squares."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import reduce_empty
from .errors import GuardError
from .heuristics import ALGORITHMS
from .instances import random_instance
from .solvers import NAIVE_LIMIT, exact_solve

DEFAULT_PROBABILITIES = (0.01, 0.02, 0.03, 0.04, 0.05, 0.1, 0.2, 0.3)
ALL_ALGORITHMS = ("lcl", "greedy", "neigh", "exact")


@dataclass
class BenchConfig:
    sizes: list[int]
    probabilities: list[float]
    repetitions: int = 50
    algorithms: tuple[str, ...] = ALL_ALGORITHMS
    seed: int = 0
    budget: float | None = 60.0
    preprocess: bool = True

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")
        if any(not 0.0 <= r <= 1.0 for r in self.probabilities):
            raise ValueError("probabilities must lie in [0, 1]")
        unknown = set(self.algorithms) - set(ALL_ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms {sorted(unknown)}")
        if any(p < 1 for p in self.sizes):
            raise ValueError("sizes must be positive")

    @property
    def heuristics(self) -> list[str]:
        return [a for a in self.algorithms if a != "exact"]


def instance_seed(base: int, p: int, r: float, rep: int) -> int:
    """Per-instance seed; independent of evaluation order."""
    ss = np.random.SeedSequence([base, p, int(round(r * 1_000_000)), rep])
    return int(ss.generate_state(1, dtype=np.uint32)[0])


@dataclass
class InstanceResult:
    p: int
    r: float
    rep: int
    seed: int
    n: int
    densities: dict[str, int]
    times_ms: dict[str, float]
    certified: bool


def _run_one(cfg: BenchConfig, p: int, r: float, rep: int) -> InstanceResult:
    seed = instance_seed(cfg.seed, p, r, rep)
    M = random_instance(p, p, r, seed)
    if cfg.preprocess:
        M = reduce_empty(M)
    densities, times = {}, {}
    certified = False
    for name in cfg.algorithms:
        if name == "exact":
            rep_ = exact_solve(M, budget=cfg.budget)
            certified = rep_.certified
        else:
            rep_ = ALGORITHMS[name](M)
        densities[name] = rep_.density
        times[name] = rep_.elapsed * 1000
    return InstanceResult(p, r, rep, seed, M.n, densities, times, certified)


def _run_task(args) -> InstanceResult:
    return _run_one(*args)


def run_instances(cfg: BenchConfig, workers: int = 1) -> list[InstanceResult]:
    if "exact" in cfg.algorithms and cfg.budget is None:
        too_big = [p for p in cfg.sizes if 2 * (p - 1) > NAIVE_LIMIT]
        if too_big:
            raise GuardError(
                f"exact search on sizes {too_big} may run for hours; set a time budget or drop 'exact'"
            )
    tasks = [(cfg, p, r, rep) for p in cfg.sizes for r in cfg.probabilities for rep in range(cfg.repetitions)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_run_task, tasks, chunksize=8))
    return [_run_task(t) for t in tasks]


@dataclass
class BenchCell:
    p: int
    r: float
    repetitions: int
    certified: int = 0
    mean_ms: dict[str, float] = field(default_factory=dict)
    mean_ratio: dict[str, float | None] = field(default_factory=dict)
    hits: dict[str, int] = field(default_factory=dict)
    wins: dict[tuple[str, str], int] = field(default_factory=dict)


def _ratio(opt: int, d: int) -> float:
    if d == opt:
        return 1.0
    return float("inf") if d == 0 else opt / d


def aggregate(cfg: BenchConfig, results: list[InstanceResult]) -> list[BenchCell]:
    """Mean of per-instance ratios d*/d and hit counts use certified instances only."""
    cells = []
    for p in cfg.sizes:
        for r in cfg.probabilities:
            rows = [x for x in results if x.p == p and x.r == r]
            cell = BenchCell(p, r, len(rows))
            good = [x for x in rows if x.certified]
            cell.certified = len(good)
            for a in cfg.algorithms:
                cell.mean_ms[a] = float(np.mean([x.times_ms[a] for x in rows]))
            for a in cfg.heuristics:
                if good:
                    cell.mean_ratio[a] = float(np.mean([_ratio(x.densities["exact"], x.densities[a]) for x in good]))
                    cell.hits[a] = sum(x.densities[a] == x.densities["exact"] for x in good)
                else:
                    cell.mean_ratio[a] = None
                    cell.hits[a] = 0
            cell.wins = head_to_head(cfg.heuristics, rows)
            cells.append(cell)
    return cells


def run_bench(cfg: BenchConfig, workers: int = 1) -> list[BenchCell]:
    return aggregate(cfg, run_instances(cfg, workers))


def head_to_head(algorithms: list[str], results: list[InstanceResult]) -> dict[tuple[str, str], int]:
    """``wins[a, b]``: instances where ``a`` is strictly denser than ``b``."""
    return {
        (a, b): sum(x.densities[a] > x.densities[b] for x in results)
        for a in algorithms
        for b in algorithms
        if a != b
    }


def cell_columns(cfg: BenchConfig, timing: bool = False) -> list[str]:
    cols = ["p", "r", "reps", "certified"]
    for a in cfg.heuristics:
        cols += [f"{a}_ratio", f"{a}_hits"]
    if timing:
        cols += [f"{a}_ms" for a in cfg.algorithms]
    return cols


def cell_rows(cfg: BenchConfig, cells: list[BenchCell], timing: bool = False) -> list[list[str]]:
    out = []
    for c in cells:
        row = [str(c.p), f"{c.r:g}", str(c.repetitions), str(c.certified)]
        for a in cfg.heuristics:
            ratio = c.mean_ratio.get(a)
            row += ["" if ratio is None else f"{ratio:.4f}", str(c.hits.get(a, 0))]
        if timing:
            row += [f"{c.mean_ms[a]:.3f}" for a in cfg.algorithms]
        out.append(row)
    return out


def to_csv(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def to_markdown(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[k]) for r in rows)) if rows else len(h) for k, h in enumerate(header)]

    def line(cells):
        return "| " + " | ".join(c.rjust(w) for c, w in zip(cells, widths)) + " |"

    sep = "|" + "|".join("-" * (w + 1) + ":" for w in widths) + "|"
    return "\n".join([line(header), sep, *map(line, rows)]) + "\n"


def wins_table(algorithms: list[str], wins: dict[tuple[str, str], int]) -> tuple[list[str], list[list[str]]]:
    header = ["winner \\ loser", *algorithms]
    rows = [[a, *("-" if a == b else str(wins[a, b]) for b in algorithms)] for a in algorithms]
    return header, rows
