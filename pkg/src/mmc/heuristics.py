"""Polynomial heuristics: LCL, Greedy and Neighborization.

All three return maximal solutions. Ties are broken the same way everywhere:
lines before columns, then the smallest current index.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .core import (
    BinaryMatrix,
    Selection,
    WorkingMatrix,
    _pair_count,
    line_conflicts,
    line_deltas,
    line_sweep,
)
from .errors import BoundsError, DomainError
from .solvers import SolveReport, complete_to_maximal, make_report

Coord = tuple[int, int]


def _sweep_pass(a: np.ndarray, lines_first: bool) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if lines_first:
        b, keep_rows = line_sweep(a)
        bt, keep_cols = line_sweep(b.T)
        return bt.T, keep_rows, keep_cols
    bt, keep_cols = line_sweep(a.T)
    b, keep_rows = line_sweep(bt.T)
    return b, keep_rows, keep_cols


def _merged(keep: np.ndarray) -> list[int]:
    # 0-based index k not starting a block <=> 1-based line k contracted
    return [int(k) for k in np.flatnonzero(~keep) if k > 0]


def lcl(M: BinaryMatrix) -> SolveReport:
    """First-come-first-served sweeps: lines then columns (LC) and the reverse (CL).

    Each sweep visits every boundary once, from the last to the first, and
    contracts it on the spot if valid, so a pass is O(p*q). The denser pass
    wins (LC on ties). A final fixpoint sweep guarantees maximality; the
    density before it is kept in ``details["pre_backstop_density"]``.
    """
    started = time.perf_counter()
    a = M.entries.astype(bool)
    outcomes = []
    for tag, lines_first in (("LC", True), ("CL", False)):
        b, keep_rows, keep_cols = _sweep_pass(a, lines_first)
        outcomes.append((_pair_count(b), tag, Selection(_merged(keep_rows), _merged(keep_cols))))
    lc, cl = outcomes
    d, tag, sel = cl if cl[0] > lc[0] else lc
    final = complete_to_maximal(M, sel)
    return make_report(
        "lcl",
        M,
        final,
        started,
        details={"pass": tag, "pre_backstop_density": d, "lc_density": lc[0], "cl_density": cl[0]},
    )


def greedy(M: BinaryMatrix) -> SolveReport:
    """Repeatedly apply the valid single contraction with the largest density gain.

    Gains for every line and column are computed in one vectorised O(p*q)
    pass per iteration. ``details["steps"]`` records ``(axis, index, gain)``
    per applied contraction, with 0-based indices into the current matrix.
    """
    started = time.perf_counter()
    w = WorkingMatrix.of(M)
    steps = []
    while True:
        best = None
        if w.p > 1:
            gains = np.where(line_conflicts(w.a), -1, line_deltas(w.a))
            k = int(np.argmax(gains))
            if gains[k] >= 0:
                best = ("L", k, int(gains[k]))
        if w.q > 1:
            at = w.a.T
            gains = np.where(line_conflicts(at), -1, line_deltas(at))
            k = int(np.argmax(gains))
            if gains[k] >= 0 and (best is None or gains[k] > best[2]):
                best = ("C", k, int(gains[k]))
        if best is None:
            break
        axis, k, gain = best
        if axis == "L":
            w.contract_line(k)
        else:
            w.contract_column(k)
        steps.append(best)
    return make_report("greedy", M, w.selection(M.p, M.q), started, details={"steps": steps})


class _Reach:
    """Precomputed block statistics for pair-reachability queries on a 0/1 array."""

    def __init__(self, a: np.ndarray):
        a = np.asarray(a, dtype=np.int64)
        self.p, self.q = a.shape
        rows = a.tolist()
        self.rowmask = [sum(1 << c for c, v in enumerate(r) if v) for r in rows]
        self.colmask = [sum(1 << r for r in range(self.p) if rows[r][c]) for c in range(self.q)]
        s = np.zeros((self.p + 1, self.q + 1), dtype=np.int64)
        s[1:, 1:] = a.cumsum(0).cumsum(1)
        self.S = s.tolist()
        self.row_conf = self._conflicts(self.rowmask)
        self.col_conf = self._conflicts(self.colmask)

    @staticmethod
    def _conflicts(masks: list[int]) -> list[list[int]]:
        # conf[x][y]: bits hit by at least two of masks[x..y]
        n = len(masks)
        conf = [[0] * n for _ in range(n)]
        for x in range(n):
            seen, clash = masks[x], 0
            for y in range(x + 1, n):
                clash |= seen & masks[y]
                seen |= masks[y]
                conf[x][y] = clash
        return conf

    def block(self, r0: int, r1: int, c0: int, c1: int) -> int:
        S = self.S
        return S[r1 + 1][c1 + 1] - S[r0][c1 + 1] - S[r1 + 1][c0] + S[r0][c0]

    def pair(self, i: int, j: int, i2: int, j2: int) -> int:
        """0-based; 1 iff some valid contraction makes (i, j) and (i2, j2) 8-neighbours."""
        if i > i2:
            i, j, i2, j2 = i2, j2, i, j
        c0, c1 = (j, j2) if j <= j2 else (j2, j)
        di, dj = i2 - i, c1 - c0
        if di <= 1 and dj <= 1:
            return 1
        # Leave exactly one boundary between the entries uncontracted on each
        # axis with a positive gap; by inheritance of validity to subsets this
        # covers every selection that brings them together.
        outside_cols = ~(((1 << (dj + 1)) - 1) << c0)
        outside_rows = ~(((1 << (di + 1)) - 1) << i)
        if di == 0:
            row_splits = [[(i, i)]]
        else:
            row_splits = []
            for k in range(i, i2):
                if (self.row_conf[i][k] | self.row_conf[k + 1][i2]) & outside_cols == 0:
                    row_splits.append([(i, k), (k + 1, i2)])
        if not row_splits:
            return 0
        if dj == 0:
            col_splits = [[(c0, c0)]]
        else:
            col_splits = []
            for l in range(c0, c1):
                if (self.col_conf[c0][l] | self.col_conf[l + 1][c1]) & outside_rows == 0:
                    col_splits.append([(c0, l), (l + 1, c1)])
        for rs in row_splits:
            for cs in col_splits:
                if all(self.block(r0, r1, k0, k1) <= 1 for r0, r1 in rs for k0, k1 in cs):
                    return 1
        return 0

    def count(self) -> int:
        ones = [(r, c) for r in range(self.p) for c in range(self.q) if self.rowmask[r] >> c & 1]
        return sum(self.pair(i, j, i2, j2) for (i, j), (i2, j2) in combinations(ones, 2))


def _coord(M: BinaryMatrix, c: Coord) -> tuple[int, int]:
    i, j = c
    if not (1 <= i <= M.p and 1 <= j <= M.q):
        raise BoundsError(f"coordinate {c} outside {M.p}x{M.q} matrix")
    return i - 1, j - 1


def n_pair(M: BinaryMatrix, a: Coord, b: Coord) -> int:
    """1 iff some valid contraction moves the 1-entries at ``a`` and ``b`` next to each other.

    Coordinates are 1-based. Returns 0 when either entry is 0.
    """
    (i, j), (i2, j2) = _coord(M, a), _coord(M, b)
    if (i, j) == (i2, j2):
        raise DomainError("n_pair needs two distinct coordinates")
    e = M.entries
    if not (e[i, j] and e[i2, j2]):
        return 0
    return _Reach(e).pair(i, j, i2, j2)


@dataclass
class PairReachability:
    count: int
    per_pair: dict[tuple[Coord, Coord], int] = field(default_factory=dict)


def n_value(M: BinaryMatrix) -> PairReachability:
    """Reachability of every unordered pair of 1-entries (1-based keys, row-major order)."""
    r = _Reach(M.entries)
    per_pair = {}
    for a, b in combinations(M.ones(), 2):
        per_pair[(a, b)] = r.pair(a[0] - 1, a[1] - 1, b[0] - 1, b[1] - 1)
    return PairReachability(sum(per_pair.values()), per_pair)


def neighborization(M: BinaryMatrix) -> SolveReport:
    """Greedy on pair reachability.

    Each step applies the valid single contraction whose result keeps the
    most pairs of 1-entries reachable, until no contraction is valid.
    """
    started = time.perf_counter()
    w = WorkingMatrix.of(M)
    steps = []
    while True:
        best = None
        for axis in ("L", "C"):
            a = w.a if axis == "L" else w.a.T
            if a.shape[0] < 2:
                continue
            for k in np.flatnonzero(~line_conflicts(a)).tolist():
                merged = np.delete(a, k + 1, axis=0)
                merged[k] = a[k] | a[k + 1]
                value = _Reach(merged).count()
                if best is None or value > best[2]:
                    best = (axis, k, value)
        if best is None:
            break
        axis, k, value = best
        if axis == "L":
            w.contract_line(k)
        else:
            w.contract_column(k)
        steps.append(best)
    return make_report("neigh", M, w.selection(M.p, M.q), started, details={"steps": steps})


ALGORITHMS = {"lcl": lcl, "greedy": greedy, "neigh": neighborization}
