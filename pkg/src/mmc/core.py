"""Binary matrices, line/column contraction, validity and density.

Indices in the public API are 1-based: contracting line ``i`` merges lines
``i`` and ``i + 1``, and a :class:`Selection` lists such indices. Arrays are
0-based internally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import BoundsError, DomainError


class _Grid:
    _dtype: type = np.int64

    def __init__(self, entries):
        arr = np.array(entries, dtype=self._dtype)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DomainError(f"expected a non-empty 2-D grid, got shape {arr.shape}")
        arr.setflags(write=False)
        self._a = arr

    @property
    def entries(self) -> np.ndarray:
        """Read-only view of the underlying array."""
        return self._a

    @property
    def p(self) -> int:
        return self._a.shape[0]

    @property
    def q(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    def __getitem__(self, ij):
        # 1-based (i, j) access, mirroring the math notation
        i, j = ij
        if not (1 <= i <= self.p and 1 <= j <= self.q):
            raise BoundsError(f"entry ({i},{j}) outside {self.p}x{self.q} matrix")
        return int(self._a[i - 1, j - 1])

    def tolist(self) -> list[list[int]]:
        return self._a.tolist()

    def __eq__(self, other):
        if not isinstance(other, _Grid):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self):
        return hash((self.shape, self._a.tobytes()))

    def __repr__(self):
        rows = ";".join("".join(str(v) for v in row) for row in self._a.tolist())
        return f"{type(self).__name__}({self.p}x{self.q}: {rows})"


class IntegerMatrix(_Grid):
    """Non-negative integer matrix; holds raw (possibly invalid) contraction results."""

    def __init__(self, entries):
        super().__init__(entries)
        if (self._a < 0).any():
            raise DomainError("integer matrix entries must be non-negative")

    def is_binary(self) -> bool:
        return bool((self._a <= 1).all())


class BinaryMatrix(_Grid):
    """Dense 0/1 matrix. ``meta`` carries provenance and is ignored by equality."""

    _dtype = np.uint8

    def __init__(self, entries, meta: dict | None = None):
        raw = np.asarray(entries)
        if raw.size and not np.isin(raw, (0, 1)).all():
            raise DomainError("binary matrix entries must be 0 or 1")
        super().__init__(raw)
        self.meta = dict(meta or {})
        self._n = int(self._a.sum(dtype=np.int64))

    @property
    def n(self) -> int:
        """Number of 1-entries."""
        return self._n

    @classmethod
    def from_rows(cls, rows: Iterable[str], meta: dict | None = None) -> "BinaryMatrix":
        """Build from strings such as ``["1000", "1010"]``."""
        return cls([[int(ch) for ch in row] for row in rows], meta=meta)

    @classmethod
    def zeros(cls, p: int, q: int) -> "BinaryMatrix":
        return cls(np.zeros((p, q), dtype=np.uint8))

    def transpose(self) -> "BinaryMatrix":
        return BinaryMatrix(self._a.T, meta=self.meta)

    def ones(self) -> list[tuple[int, int]]:
        """1-based coordinates of the 1-entries in row-major order."""
        return [(int(i) + 1, int(j) + 1) for i, j in zip(*np.nonzero(self._a))]


@dataclass(frozen=True)
class Selection:
    """Sorted 1-based line indices ``I`` and column indices ``J`` to contract."""

    I: tuple[int, ...] = ()
    J: tuple[int, ...] = ()

    def __post_init__(self):
        for name in ("I", "J"):
            idx = tuple(int(v) for v in getattr(self, name))
            if any(v < 1 for v in idx):
                raise BoundsError(f"{name} indices are 1-based, got {idx}")
            if any(a >= b for a, b in zip(idx, idx[1:])):
                raise DomainError(f"{name} must be strictly increasing, got {idx}")
            object.__setattr__(self, name, idx)

    def check(self, M: _Grid) -> None:
        if self.I and self.I[-1] > M.p - 1:
            raise BoundsError(f"line index {self.I[-1]} outside [1, {M.p - 1}]")
        if self.J and self.J[-1] > M.q - 1:
            raise BoundsError(f"column index {self.J[-1]} outside [1, {M.q - 1}]")

    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return (self.I, self.J)

    def __or__(self, other: "Selection") -> "Selection":
        return Selection(sorted(set(self.I) | set(other.I)), sorted(set(self.J) | set(other.J)))

    def to_text(self) -> str:
        return f"I: {','.join(map(str, self.I))}\nJ: {','.join(map(str, self.J))}\n"

    @classmethod
    def from_text(cls, text: str) -> "Selection":
        parts = {}
        for line in text.splitlines():
            if not line.strip():
                continue
            tag, _, rest = line.partition(":")
            tag = tag.strip()
            if tag not in ("I", "J"):
                raise DomainError(f"unknown selection line {line!r}")
            parts[tag] = [int(v) for v in rest.split(",") if v.strip()]
        return cls(parts.get("I", ()), parts.get("J", ()))


def _block_starts(size: int, contracted: Sequence[int]) -> np.ndarray:
    merged = set(contracted)
    return np.array([0] + [k for k in range(1, size) if k not in merged], dtype=np.intp)


def contract(M: _Grid, sel: Selection) -> IntegerMatrix:
    """Raw contraction ``C(M, I, J)`` as a ``p x q`` integer matrix.

    Merged lines and columns are summed, later ones shift up/left, and the
    freed trailing lines/columns are zero. Entries above 1 mean the
    contraction is invalid.
    """
    sel.check(M)
    a = M.entries.astype(np.int64)
    summed = np.add.reduceat(a, _block_starts(M.p, sel.I), axis=0)
    summed = np.add.reduceat(summed, _block_starts(M.q, sel.J), axis=1)
    out = np.zeros(M.shape, dtype=np.int64)
    out[: summed.shape[0], : summed.shape[1]] = summed
    return IntegerMatrix(out)


def is_valid(M: _Grid, sel: Selection) -> bool:
    return contract(M, sel).is_binary()


def trim(C: IntegerMatrix, sel: Selection) -> BinaryMatrix:
    """Drop the ``|I|`` trailing lines and ``|J|`` trailing columns of a valid contraction."""
    sel.check(C)
    if not C.is_binary():
        raise DomainError("cannot trim an invalid contraction (entry > 1)")
    return BinaryMatrix(C.entries[: C.p - len(sel.I), : C.q - len(sel.J)])


def apply(M: BinaryMatrix, sel: Selection) -> BinaryMatrix:
    """Contract and trim in one step; raises DomainError if ``sel`` is invalid."""
    return trim(contract(M, sel), sel)


def _pair_count(a: np.ndarray) -> int:
    # horizontal, vertical and both diagonals, each unordered pair once
    return int(
        np.count_nonzero(a[:, :-1] & a[:, 1:])
        + np.count_nonzero(a[:-1, :] & a[1:, :])
        + np.count_nonzero(a[:-1, :-1] & a[1:, 1:])
        + np.count_nonzero(a[:-1, 1:] & a[1:, :-1])
    )


def density(M: _Grid) -> int:
    """Number of unordered pairs of 1-entries that are 8-neighbours."""
    a = M.entries
    if a.size and a.max() > 1:
        raise DomainError("density is only defined for 0/1 matrices")
    return _pair_count(a.astype(bool))


def reduce_empty(M: BinaryMatrix) -> BinaryMatrix:
    """Delete every all-zero line and column (benchmark preprocessing)."""
    a = M.entries
    rows = a.any(axis=1)
    cols = a.any(axis=0)
    if not rows.any():
        return BinaryMatrix.zeros(1, 1)
    return BinaryMatrix(a[rows][:, cols], meta=M.meta)


def _check_line(M: _Grid, i: int) -> None:
    if not 1 <= i <= M.p - 1:
        raise BoundsError(f"line index {i} outside [1, {M.p - 1}]")


def _check_column(M: _Grid, j: int) -> None:
    if not 1 <= j <= M.q - 1:
        raise BoundsError(f"column index {j} outside [1, {M.q - 1}]")


def single_line_valid(M: BinaryMatrix, i: int) -> bool:
    _check_line(M, i)
    a = M.entries
    return not bool((a[i - 1] & a[i]).any())


def single_column_valid(M: BinaryMatrix, j: int) -> bool:
    _check_column(M, j)
    a = M.entries
    return not bool((a[:, j - 1] & a[:, j]).any())


def _smear(row: np.ndarray) -> np.ndarray:
    # s[j] = row[j-1] + row[j] + row[j+1], zero outside
    s = row.astype(np.int64)
    out = s.copy()
    out[1:] += s[:-1]
    out[:-1] += s[1:]
    return out


def _gap2_pairs(a: np.ndarray) -> np.ndarray:
    """``g[k]`` = neighbour pairs between lines ``k`` and ``k+2`` if they were adjacent."""
    if a.shape[0] < 3:
        return np.zeros(max(a.shape[0] - 2, 0), dtype=np.int64)
    lo = a[:-2].astype(np.int64)
    hi = a[2:].astype(np.int64)
    sm = hi.copy()
    sm[:, 1:] += hi[:, :-1]
    sm[:, :-1] += hi[:, 1:]
    return (lo * sm).sum(axis=1)


def line_deltas(a: np.ndarray) -> np.ndarray:
    """Density gain of every single line contraction of a 0/1 array.

    Merging disjoint lines ``k`` and ``k+1`` only creates pairs between
    ``k-1``/``k+1`` and ``k``/``k+2``; pairs across the merged lines are kept
    (vertical becomes horizontal). Entry ``k`` (0-based) is meaningful only
    where that contraction is valid.
    """
    p = a.shape[0]
    if p < 2:
        return np.zeros(0, dtype=np.int64)
    g = np.zeros(p, dtype=np.int64)
    g[1 : p - 1] = _gap2_pairs(a)
    # g[m] pairs lines m-1 and m+1; delta(k) = g[k] + g[k+1]
    return g[: p - 1] + g[1:]


def line_conflicts(a: np.ndarray) -> np.ndarray:
    """Boolean per boundary: True where merging lines ``k`` and ``k+1`` collides."""
    return (a[:-1] & a[1:]).any(axis=1)


def density_delta_line(M: BinaryMatrix, i: int) -> int:
    """Density change of contracting line ``i``, looking only at lines i-1 .. i+2."""
    if not single_line_valid(M, i):
        raise DomainError(f"contracting line {i} is not valid")
    a = M.entries
    total = 0
    if i >= 2:
        total += int((a[i - 2].astype(np.int64) * _smear(a[i])).sum())
    if i + 1 < M.p:
        total += int((a[i - 1].astype(np.int64) * _smear(a[i + 1])).sum())
    return total


def density_delta_column(M: BinaryMatrix, j: int) -> int:
    if not single_column_valid(M, j):
        raise DomainError(f"contracting column {j} is not valid")
    return density_delta_line(M.transpose(), j)


@dataclass
class WorkingMatrix:
    """Mutable contraction state used by the heuristics.

    Tracks the current contracted array together with the original index at
    which every current line/column block starts, so contractions applied in
    any order can be reported as a :class:`Selection` on the input matrix.
    """

    a: np.ndarray
    row_starts: list[int] = field(default_factory=list)
    col_starts: list[int] = field(default_factory=list)

    @classmethod
    def of(cls, M: BinaryMatrix) -> "WorkingMatrix":
        return cls(M.entries.astype(np.uint8).copy(), list(range(M.p)), list(range(M.q)))

    @property
    def p(self) -> int:
        return self.a.shape[0]

    @property
    def q(self) -> int:
        return self.a.shape[1]

    def line_valid(self, k: int) -> bool:
        """0-based: may current lines ``k`` and ``k+1`` merge?"""
        return not bool((self.a[k] & self.a[k + 1]).any())

    def column_valid(self, k: int) -> bool:
        return not bool((self.a[:, k] & self.a[:, k + 1]).any())

    def contract_line(self, k: int) -> None:
        self.a[k] |= self.a[k + 1]
        self.a = np.delete(self.a, k + 1, axis=0)
        del self.row_starts[k + 1]

    def contract_column(self, k: int) -> None:
        self.a[:, k] |= self.a[:, k + 1]
        self.a = np.delete(self.a, k + 1, axis=1)
        del self.col_starts[k + 1]

    def selection(self, p: int, q: int) -> Selection:
        # original line i (1-based) is contracted iff 0-based row i is not a block start
        rs, cs = set(self.row_starts), set(self.col_starts)
        return Selection([i for i in range(1, p) if i not in rs], [j for j in range(1, q) if j not in cs])

    def matrix(self) -> BinaryMatrix:
        return BinaryMatrix(self.a)


def line_sweep(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Contract every valid line once, from the last boundary up to the first.

    Returns the compacted array and a boolean mask over the original lines
    marking block starts. Linear in the array size: the block beginning at
    line ``k+1`` is accumulated in place at row ``k+1``.
    """
    a = a.copy()
    p = a.shape[0]
    keep = np.ones(p, dtype=bool)
    for k in range(p - 2, -1, -1):
        if not (a[k] & a[k + 1]).any():
            a[k] |= a[k + 1]
            keep[k + 1] = False
    return a[keep], keep
