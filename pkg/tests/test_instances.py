import itertools

import numpy as np
import pytest

from conftest import clique_number
from mmc import (
    BinaryMatrix,
    DomainError,
    Graph,
    ParseError,
    density,
    exact_solve,
    from_clique,
    naive_enumerate,
    parse_graph,
    parse_instance,
    random_instance,
    serialize_instance,
)
from mmc.instances import serialize_graph, verify_reduction_gadget

TRIANGLE_TAIL = Graph(4, frozenset({(1, 2), (1, 3), (2, 3), (3, 4)}))


def expected_dots(G):
    """The layout rules written out independently, as a set of 1-based coordinates."""
    dots = set()
    for k in range(1, 7):
        dots |= {(1, k), (k, 1)}
    for i in range(1, G.vertex_count + 1):
        l = 4 * i + 3
        left = {(l, 1), (l + 1, 3), (l + 2, 3), (l + 2, 5), (l + 3, 5), (l + 3, 1)}
        dots |= left | {(c, r) for r, c in left}
        dots |= {(l, l), (l + 2, l + 2)}
    for i, j in itertools.combinations(range(1, G.vertex_count + 1), 2):
        if not G.adjacent(i, j):
            li, lj = 4 * i + 3, 4 * j + 3
            dots |= {(li, lj), (li + 1, lj + 1), (lj, li), (lj + 1, li + 1)}
    return dots


def test_triangle_with_tail_layout():
    layout = from_clique(TRIANGLE_TAIL)
    M = layout.matrix
    assert M.shape == (22, 22)
    assert set(M.ones()) == expected_dots(TRIANGLE_TAIL)
    assert M.n == 75
    assert layout.d0 == 39 == density(M)
    assert layout.l == {1: 7, 2: 11, 3: 15, 4: 19}
    assert verify_reduction_gadget(layout)


def test_triangle_reduction():
    K3 = Graph(3, frozenset({(1, 2), (1, 3), (2, 3)}))
    layout = from_clique(K3)
    assert layout.matrix.shape == (18, 18)
    assert layout.d0 == 29
    assert verify_reduction_gadget(layout)
    assert exact_solve(layout.matrix).density == 32


def test_single_vertex_reduction():
    layout = from_clique(Graph(1))
    assert layout.matrix.shape == (10, 10)
    assert layout.d0 == 17
    assert naive_enumerate(layout.matrix).density == 18


def test_gadget_mutation_is_detected():
    layout = from_clique(TRIANGLE_TAIL)
    a = layout.matrix.entries.copy()
    a[0, 3] = 0  # drop a border 1
    layout.matrix = BinaryMatrix(a)
    assert not verify_reduction_gadget(layout)


def test_gadget_holds_for_five_vertex_graphs():
    pairs = list(itertools.combinations(range(1, 6), 2))
    for mask in range(0, 1 << len(pairs), 7):
        G = Graph(5, frozenset(e for k, e in enumerate(pairs) if mask >> k & 1))
        layout = from_clique(G)
        assert verify_reduction_gadget(layout)
        assert set(layout.matrix.ones()) == expected_dots(G)


def test_clique_oracle_sanity():
    assert clique_number(TRIANGLE_TAIL) == 3
    assert clique_number(Graph(4)) == 1


def test_random_instance_extremes_and_determinism():
    assert random_instance(4, 5, 0.0, 3).n == 0
    assert random_instance(4, 5, 1.0, 3).n == 20
    assert random_instance(6, 6, 0.3, 9) == random_instance(6, 6, 0.3, 9)
    assert random_instance(6, 6, 0.3, 9).meta["seed"] == 9
    with pytest.raises(DomainError):
        random_instance(3, 3, 1.5, 0)


def test_random_instance_one_count_is_binomial():
    p, q, r = 400, 500, 0.07
    total = sum(random_instance(p, q, r, s).n for s in range(5))
    trials = 5 * p * q
    assert abs(total - r * trials) <= 5 * np.sqrt(trials * r * (1 - r))


def test_instance_roundtrip(sample):
    text = serialize_instance(sample)
    assert text.startswith("4 4\n1000\n1010\n0010\n0101\n")
    assert parse_instance(text) == sample
    assert parse_instance("1 1\n1\n") == BinaryMatrix([[1]])


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("2 2\n10\n1\n", 3, "truncated row"),
        ("2 2\n10\n", 3, "truncated input"),
        ("2 2\n10\n0x\n", 3, "illegal character"),
        ("1 2\n10\n01\n", 3, "dimension mismatch"),
        ("two 2\n", 1, "header"),
        ("", 1, "empty"),
    ],
)
def test_instance_parse_errors(text, line, fragment):
    with pytest.raises(ParseError) as err:
        parse_instance(text)
    assert err.value.line == line
    assert fragment in str(err.value)


def test_graph_parse():
    G = parse_graph("p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n")
    assert G == Graph(3, frozenset({(1, 2), (2, 3), (1, 3)}))
    assert parse_graph("p edge 4 4\ne 1 2\ne 2 3\ne 1 3\ne 3 4\n") == TRIANGLE_TAIL
    assert parse_graph(serialize_graph(TRIANGLE_TAIL)) == TRIANGLE_TAIL
    assert parse_graph("c comment\np edge 2 0\n") == Graph(2)


@pytest.mark.parametrize(
    "text",
    [
        "p edge 3 1\ne 2 2\n",
        "p edge 3 2\ne 1 2\ne 2 1\n",
        "p edge 3 1\ne 1 4\n",
        "e 1 2\n",
        "p edge 3 2\ne 1 2\n",
        "p edge 3 1\ne 1 b\n",
    ],
)
def test_graph_parse_errors(text):
    with pytest.raises(ParseError):
        parse_graph(text)
