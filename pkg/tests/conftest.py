import itertools

import numpy as np
import pytest

from mmc import BinaryMatrix, Selection, is_valid


SAMPLE_ROWS = ["1000", "1010", "0010", "0101"]


@pytest.fixture
def sample():
    return BinaryMatrix.from_rows(SAMPLE_ROWS)


def line_matrix(p, i):
    """L_i by construction: row i sums rows i and i+1, later rows shift up."""
    L = np.zeros((p, p), dtype=np.int64)
    for r in range(1, p + 1):
        if r < i:
            L[r - 1, r - 1] = 1
        elif r == i:
            L[r - 1, i - 1] = L[r - 1, i] = 1
        elif r < p:
            L[r - 1, r] = 1
    return L


def column_matrix(q, j):
    """C_j by construction (transpose of L_j)."""
    return line_matrix(q, j).T


def product_contraction(M, I, J):
    """Independent oracle: (prod_k L_{i_k}) . M . (prod_{k=|J|..1} C_{j_k})."""
    out = M.entries.astype(np.int64)
    left = np.eye(M.p, dtype=np.int64)
    for i in I:
        left = left @ line_matrix(M.p, i)
    right = np.eye(M.q, dtype=np.int64)
    for j in reversed(J):
        right = right @ column_matrix(M.q, j)
    return left @ out @ right


def brute_density(a):
    """Neighbour pairs by explicit pair enumeration."""
    ones = list(zip(*np.nonzero(np.asarray(a))))
    return sum(1 for (i, j), (k, l) in itertools.combinations(ones, 2) if max(abs(i - k), abs(j - l)) == 1)


def all_matrices(p, q):
    for bits in range(1 << (p * q)):
        yield BinaryMatrix(np.array([(bits >> k) & 1 for k in range(p * q)], dtype=np.uint8).reshape(p, q))


def all_selections(p, q):
    for ni in range(p):
        for I in itertools.combinations(range(1, p), ni):
            for nj in range(q):
                for J in itertools.combinations(range(1, q), nj):
                    yield Selection(I, J)


def brute_pair(M, a, b):
    """Track two entries through every valid selection; 1 if they ever become 8-neighbours."""
    for sel in all_selections(M.p, M.q):
        if not is_valid(M, sel):
            continue

        def moved(r, c):
            return r - sum(1 for x in sel.I if x < r), c - sum(1 for y in sel.J if y < c)

        (r1, c1), (r2, c2) = moved(*a), moved(*b)
        if max(abs(r1 - r2), abs(c1 - c2)) == 1:
            return 1
    return 0


def clique_number(G):
    best = 0
    vs = range(1, G.vertex_count + 1)
    for k in range(1, G.vertex_count + 1):
        for S in itertools.combinations(vs, k):
            if all(G.adjacent(u, v) for u, v in itertools.combinations(S, 2)):
                best = k
                break
    return best


def random_matrix(rng, p, q, r):
    return BinaryMatrix((rng.random((p, q)) < r).astype(np.uint8))
