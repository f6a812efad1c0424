"""Instance sources: seeded random matrices, the clique reduction, and text formats.

Matrix text format::

    p q
    <p lines of exactly q characters from {0,1}>

Graph format (DIMACS-like edge list, 1-based vertices)::

    p edge <n> <m>
    e <u> <v>
    ...
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import BinaryMatrix, density, single_column_valid, single_line_valid
from .errors import DomainError, ParseError

GENERATOR = "numpy.random.PCG64"


def random_instance(p: int, q: int, r: float, seed: int) -> BinaryMatrix:
    """``p x q`` matrix whose entries are independently 1 with probability ``r``."""
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"probability must lie in [0, 1], got {r}")
    if p < 1 or q < 1:
        raise DomainError(f"dimensions must be positive, got {p}x{q}")
    rng = np.random.Generator(np.random.PCG64(seed))
    a = (rng.random((p, q)) < r).astype(np.uint8)
    return BinaryMatrix(a, meta={"generator": GENERATOR, "seed": int(seed), "p": p, "q": q, "r": r})


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.vertex_count < 1:
            raise DomainError("a graph needs at least one vertex")
        norm = set()
        for e in self.edges:
            u, v = sorted(e)
            if u == v:
                raise DomainError(f"self-loop on vertex {u}")
            if u < 1 or v > self.vertex_count:
                raise DomainError(f"edge ({u},{v}) outside vertices 1..{self.vertex_count}")
            norm.add((u, v))
        object.__setattr__(self, "edges", frozenset(norm))

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges


@dataclass
class ReductionLayout:
    graph: Graph
    matrix: BinaryMatrix
    l: dict[int, int]
    c: dict[int, int]
    d0: int


def base_density(vertices: int, edges: int) -> int:
    return 11 + 6 * vertices + (vertices * (vertices - 1) - 2 * edges)


def from_clique(G: Graph) -> ReductionLayout:
    """Matrix whose best contraction density is ``d0 + omega(G)``.

    Node ``i`` owns lines and columns ``4i+3 .. 4i+6``. Two 1-entries on the
    node's diagonal block move together when line and column ``4i+3`` are
    contracted; each non-edge puts a pair of 1-entries across the two nodes'
    blocks that would collide if both nodes were chosen. 1-entries in the
    first six lines and columns forbid every other contraction.
    """
    nv = G.vertex_count
    size = 4 * nv + 6
    a = np.zeros((size + 1, size + 1), dtype=np.uint8)  # 1-based scratch
    for k in range(1, 7):
        a[1, k] = a[k, 1] = 1
    first = {i: 6 + 4 * (i - 1) + 1 for i in range(1, nv + 1)}
    for i, l in first.items():
        for di, dj in ((0, 1), (1, 3), (2, 3), (2, 5), (3, 5), (3, 1)):
            a[l + di, dj] = 1
            a[dj, l + di] = 1
        a[l, l] = a[l + 2, l + 2] = 1
    for i in range(1, nv + 1):
        for j in range(1, nv + 1):
            if i != j and not G.adjacent(i, j):
                a[first[i], first[j]] = a[first[i] + 1, first[j] + 1] = 1
    M = BinaryMatrix(a[1:, 1:], meta={"source": "clique-reduction", "vertices": nv, "edges": len(G.edges)})
    return ReductionLayout(G, M, dict(first), dict(first), base_density(nv, len(G.edges)))


def verify_reduction_gadget(layout: ReductionLayout) -> bool:
    """Only the node lines ``l_i`` and columns ``c_i`` are contractible, and density is ``d0``."""
    M = layout.matrix
    lines = {i for i in range(1, M.p) if single_line_valid(M, i)}
    cols = {j for j in range(1, M.q) if single_column_valid(M, j)}
    return lines == set(layout.l.values()) and cols == set(layout.c.values()) and density(M) == layout.d0


def serialize_instance(M: BinaryMatrix) -> str:
    rows = ("".join(map(str, row)) for row in M.entries.tolist())
    return f"{M.p} {M.q}\n" + "".join(r + "\n" for r in rows)


def parse_instance(text: str) -> BinaryMatrix:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty input", 1)
    head = lines[0].split(" ")
    if len(head) != 2 or not all(h.isdigit() for h in head):
        raise ParseError(f"header must be 'p q', got {lines[0]!r}", 1)
    p, q = map(int, head)
    if p < 1 or q < 1:
        raise ParseError(f"dimensions must be positive, got {p}x{q}", 1)
    rows = []
    for k in range(p):
        lineno = k + 2
        if k + 1 >= len(lines):
            raise ParseError(f"truncated input: expected {p} rows, found {k}", lineno)
        row = lines[k + 1]
        bad = [ch for ch in row if ch not in "01"]
        if bad:
            raise ParseError(f"illegal character {bad[0]!r}", lineno)
        if len(row) != q:
            raise ParseError(f"truncated row: expected {q} entries, found {len(row)}", lineno)
        rows.append(row)
    if len(lines) > p + 1:
        raise ParseError(f"dimension mismatch: more than {p} rows", p + 2)
    return BinaryMatrix.from_rows(rows)


def serialize_graph(G: Graph) -> str:
    body = "".join(f"e {u} {v}\n" for u, v in sorted(G.edges))
    return f"p edge {G.vertex_count} {len(G.edges)}\n" + body


def parse_graph(text: str) -> Graph:
    """Read a DIMACS-style edge list; comment lines start with ``c``."""
    n = m = None
    edges: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        try:
            if parts[0] == "p":
                if len(parts) != 4 or parts[1] not in ("edge", "col"):
                    raise ParseError(f"bad problem line {raw!r}", lineno)
                n, m = int(parts[2]), int(parts[3])
            elif parts[0] == "e":
                if n is None:
                    raise ParseError("edge before problem line", lineno)
                if len(parts) != 3:
                    raise ParseError(f"bad edge line {raw!r}", lineno)
                u, v = int(parts[1]), int(parts[2])
                if u == v:
                    raise ParseError(f"self-loop on vertex {u}", lineno)
                if not (1 <= u <= n and 1 <= v <= n):
                    raise ParseError(f"vertex out of range in {raw!r}", lineno)
                e = (min(u, v), max(u, v))
                if e in edges:
                    raise ParseError(f"duplicate edge {e}", lineno)
                edges.add(e)
            else:
                raise ParseError(f"unknown line type {parts[0]!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"non-integer field in {raw!r}", lineno) from None
    if n is None:
        raise ParseError("missing problem line")
    if m != len(edges):
        raise ParseError(f"header announces {m} edges, found {len(edges)}")
    return Graph(n, frozenset(edges))
