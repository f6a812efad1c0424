"""Maximality, exhaustive enumeration and an exact branch-and-prune solver."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from .core import (
    BinaryMatrix,
    Selection,
    WorkingMatrix,
    _block_starts,
    apply,
    contract,
    density,
    is_valid,
)
from .errors import DomainError, GuardError

CSV_HEADER = "algorithm,p,q,n,density,elapsed_ms,I,J"

# 2**18 candidate selections; larger instances need force=True
NAIVE_LIMIT = 18


@dataclass
class SolveReport:
    algorithm: str
    selection: Selection
    result: BinaryMatrix
    density: int
    elapsed: float
    instance_meta: dict = field(default_factory=dict)
    certified: bool = True
    details: dict = field(default_factory=dict)
    p: int = 0
    q: int = 0
    n: int = 0

    def csv_row(self) -> str:
        return ",".join(
            [
                self.algorithm,
                str(self.p),
                str(self.q),
                str(self.n),
                str(self.density),
                f"{self.elapsed * 1000:.3f}",
                ";".join(map(str, self.selection.I)),
                ";".join(map(str, self.selection.J)),
            ]
        )


def make_report(algorithm: str, M: BinaryMatrix, sel: Selection, started: float, **extra) -> SolveReport:
    result = apply(M, sel)
    return SolveReport(
        algorithm=algorithm,
        selection=sel,
        result=result,
        density=density(result),
        elapsed=time.perf_counter() - started,
        instance_meta=dict(M.meta),
        p=M.p,
        q=M.q,
        n=M.n,
        **extra,
    )


def is_maximal(M: BinaryMatrix, sel: Selection) -> bool:
    """True iff no further single line or column contraction is valid after ``sel``."""
    if not is_valid(M, sel):
        raise DomainError(f"selection {sel} is not valid for this matrix")
    a = apply(M, sel).entries
    if a.shape[0] > 1 and not (a[:-1] & a[1:]).any(axis=1).all():
        return False
    if a.shape[1] > 1 and not (a[:, :-1] & a[:, 1:]).any(axis=0).all():
        return False
    return True


def _working(M: BinaryMatrix, sel: Selection) -> WorkingMatrix:
    return WorkingMatrix(
        apply(M, sel).entries.copy(),
        _block_starts(M.p, sel.I).tolist(),
        _block_starts(M.q, sel.J).tolist(),
    )


def complete_to_maximal(M: BinaryMatrix, sel: Selection = Selection(), policy: str = "lines-first") -> Selection:
    """Extend a valid selection until it is maximal.

    ``policy`` fixes the scan order: ``"lines-first"`` sweeps lines from the
    last down to the first, then columns likewise, repeating until nothing
    changes; ``"columns-first"`` starts with the columns.
    """
    if policy not in ("lines-first", "columns-first"):
        raise ValueError(f"unknown policy {policy!r}")
    if not is_valid(M, sel):
        raise DomainError(f"selection {sel} is not valid for this matrix")
    w = _working(M, sel)

    def sweep_lines() -> bool:
        changed = False
        for k in range(w.p - 2, -1, -1):
            if w.line_valid(k):
                w.contract_line(k)
                changed = True
        return changed

    def sweep_columns() -> bool:
        changed = False
        for k in range(w.q - 2, -1, -1):
            if w.column_valid(k):
                w.contract_column(k)
                changed = True
        return changed

    order = (sweep_lines, sweep_columns) if policy == "lines-first" else (sweep_columns, sweep_lines)
    while True:
        changed = False
        for step in order:
            changed |= step()
        if not changed:
            break
    return w.selection(M.p, M.q)


def naive_enumerate(M: BinaryMatrix, force: bool = False) -> SolveReport:
    """Try every subset of lines and columns; keep the densest valid one.

    Ties go to the lexicographically smallest ``(I, J)``. Refuses instances
    with more than ``2**NAIVE_LIMIT`` subsets unless ``force`` is set.
    """
    started = time.perf_counter()
    bits = (M.p - 1) + (M.q - 1)
    if bits > NAIVE_LIMIT and not force:
        raise GuardError(f"naive enumeration over 2^{bits} subsets refused (limit 2^{NAIVE_LIMIT}); pass force=True")
    best, best_key = -1, None
    lines, cols = range(1, M.p), range(1, M.q)
    for ni in range(M.p):
        for I in itertools.combinations(lines, ni):
            for nj in range(M.q):
                for J in itertools.combinations(cols, nj):
                    sel = Selection(I, J)
                    C = contract(M, sel)
                    if not C.is_binary():
                        continue
                    d = density(C)
                    if d > best or (d == best and sel.key() < best_key):
                        best, best_key = d, sel.key()
    return make_report("naive", M, Selection(*best_key), started)


class _OutOfTime(Exception):
    pass


def _row_masks(a: np.ndarray) -> list[int]:
    weights = [1 << c for c in range(a.shape[1])]
    return [sum(w for w, v in zip(weights, row) if v) for row in a.tolist()]


def _pairs_within(m: int) -> int:
    return (m & (m >> 1)).bit_count()


def _pairs_between(left: int, right: int) -> int:
    return (left & right).bit_count() + (left & (right >> 1)).bit_count() + (left & (right << 1)).bit_count()


def exact_solve(M: BinaryMatrix, budget: float | None = None) -> SolveReport:
    """Optimal contraction by depth-first search over contract/skip decisions.

    Lines are decided from the last boundary to the first, then columns, with
    the matrix kept as bitmasks so each decision is checked for collisions in
    O(1) word operations. Lines or columns that are not individually valid are
    never tried (validity is inherited by subsets). The search stops early if
    the trivial ``4n`` bound is reached; "skip" is explored before
    "contract", so the first leaf is the empty selection and the cutoff cannot
    break the tie rule (4n is only attainable when n = 0). With ``budget`` (seconds) the best
    solution found so far is returned with ``certified=False`` on timeout.

    Ties go to the lexicographically smallest ``(I, J)``.
    """
    started = time.perf_counter()
    deadline = None if budget is None else started + budget
    p, q = M.p, M.q
    a = M.entries
    rows = _row_masks(a)
    line_ok = [False] + [not (a[k - 1] & a[k]).any() for k in range(1, p)]
    ceiling = 4 * M.n

    best = {"d": -1, "key": None}
    ticks = [0]

    def tick():
        ticks[0] += 1
        if deadline is not None and ticks[0] & 0x3FF == 0 and time.perf_counter() > deadline:
            raise _OutOfTime

    def offer(d: int, I: list[int], J: list[int]):
        key = (tuple(sorted(I)), tuple(sorted(J)))
        if d > best["d"] or (d == best["d"] and key < best["key"]):
            best["d"], best["key"] = d, key

    def columns(blocks: list[int], I: list[int]):
        # blocks: row-block masks top to bottom -> column masks over block indices
        cols = [0] * q
        for b, m in enumerate(blocks):
            bit = 1 << b
            while m:
                low = m & -m
                cols[low.bit_length() - 1] |= bit
                m ^= low
        col_ok = [False] + [cols[k - 1] & cols[k] == 0 for k in range(1, q)]
        J: list[int] = []

        def go(k: int, cur: int, acc: int, right: int | None):
            # cur: block of columns starting at column k (0-based), acc: pairs
            # inside finalised blocks to the right, right: nearest finalised block
            tick()
            if best["d"] >= ceiling:
                return
            if k == 0:
                d = acc + _pairs_within(cur) + (_pairs_between(cur, right) if right is not None else 0)
                offer(d, I, J)
                return
            left = cols[k - 1]
            closed = acc + _pairs_within(cur) + (_pairs_between(cur, right) if right is not None else 0)
            go(k - 1, left, closed, cur)
            if col_ok[k] and not (left & cur):
                J.append(k)
                go(k - 1, left | cur, acc, right)
                J.pop()

        go(q - 1, cols[q - 1], 0, None)

    I: list[int] = []

    def lines(k: int, cur: int, below: list[int]):
        # cur: OR of the row block starting at 0-based row k
        tick()
        if best["d"] >= ceiling:
            return
        if k == 0:
            columns([cur] + below[::-1], I)
            return
        above = rows[k - 1]
        below.append(cur)
        lines(k - 1, above, below)
        below.pop()
        if line_ok[k] and not (above & cur):
            I.append(k)
            lines(k - 1, above | cur, below)
            I.pop()

    certified = True
    try:
        lines(p - 1, rows[p - 1], [])
    except _OutOfTime:
        certified = False
    if best["key"] is None:
        # timed out before the first leaf: the empty selection is always valid
        best["key"] = ((), ())
    return make_report("exact", M, Selection(*best["key"]), started, certified=certified)
