import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_pair
from mmc import (
    BinaryMatrix,
    DomainError,
    apply,
    density,
    greedy,
    is_maximal,
    is_valid,
    lcl,
    n_pair,
    n_value,
    neighborization,
    random_instance,
)
from mmc.core import density_delta_column, density_delta_line

HEURISTICS = [lcl, greedy, neighborization]


def test_lcl_sample_matrix(sample):
    rep = lcl(sample)
    assert rep.density == 10
    assert rep.details["lc_density"] == 10


def test_greedy_sample_matrix(sample):
    # the first step merges columns 2 and 3 (gain 4 beats 3 for line 3),
    # which leaves a maximal matrix of density 8
    rep = greedy(sample)
    assert rep.details["steps"][0] == ("C", 1, 4)
    assert rep.density == 8
    assert rep.result.tolist() == [[1, 0, 0], [1, 1, 0], [0, 1, 0], [0, 1, 1]]


def test_neighborization_sample_matrix(sample):
    assert neighborization(sample).density == 10


@pytest.mark.parametrize("fn", HEURISTICS)
def test_identity_two_by_two(fn):
    rep = fn(BinaryMatrix.from_rows(["10", "01"]))
    assert rep.density == 1


@pytest.mark.parametrize("fn", HEURISTICS)
def test_single_one_and_empty(fn):
    assert fn(BinaryMatrix([[1]])).density == 0
    rep = fn(BinaryMatrix.zeros(3, 3))
    assert rep.density == 0 and rep.result.shape == (1, 1)


def test_lcl_one_per_line_reaches_n_minus_1():
    rng = np.random.default_rng(0)
    for n in (3, 5, 8):
        a = np.zeros((n, n), dtype=np.uint8)
        a[np.arange(n), rng.permutation(n)] = 1
        rep = lcl(BinaryMatrix(a))
        assert rep.details["lc_density"] == n - 1
        assert rep.density >= n - 1


@pytest.mark.parametrize("fn", HEURISTICS)
def test_heuristic_output_is_valid_and_maximal(fn):
    for seed in range(60):
        M = random_instance(8, 9, 0.15 + 0.05 * (seed % 4), seed)
        rep = fn(M)
        assert is_valid(M, rep.selection)
        assert is_maximal(M, rep.selection)
        assert rep.density == density(apply(M, rep.selection))
        if M.n:
            assert 2 * math.sqrt(M.n) - 2 <= rep.density <= 4 * M.n


def test_lcl_backstop_never_changes_result():
    for seed in range(200):
        M = random_instance(9, 9, 0.2, seed)
        rep = lcl(M)
        assert rep.details["pre_backstop_density"] == rep.density


def test_greedy_steps_are_best_available():
    # replay: every recorded step must carry the largest valid gain at that point
    for seed in range(30):
        M = random_instance(7, 7, 0.2, seed)
        rep = greedy(M)
        cur = M
        for axis, k, gain in rep.details["steps"]:
            line_gains = [density_delta_line(cur, i) for i in range(1, cur.p) if _line_ok(cur, i)]
            col_gains = [density_delta_column(cur, j) for j in range(1, cur.q) if _col_ok(cur, j)]
            assert gain == max(line_gains + col_gains)
            rows = cur.entries
            if axis == "L":
                merged = np.delete(rows, k + 1, axis=0)
                merged[k] = rows[k] | rows[k + 1]
            else:
                merged = np.delete(rows, k + 1, axis=1)
                merged[:, k] = rows[:, k] | rows[:, k + 1]
            cur = BinaryMatrix(merged)
        assert cur == rep.result


def _line_ok(M, i):
    return not (M.entries[i - 1] & M.entries[i]).any()


def _col_ok(M, j):
    return not (M.entries[:, j - 1] & M.entries[:, j]).any()


def test_n_pair_examples(sample):
    assert n_pair(sample, (2, 3), (4, 2)) == 1
    assert n_pair(BinaryMatrix([[1, 1, 0, 1]]), (1, 1), (1, 4)) == 0
    with pytest.raises(DomainError):
        n_pair(sample, (1, 1), (1, 1))


def test_n_value_sample_matrix(sample):
    value = n_value(sample)
    assert value.count == sum(brute_pair(sample, a, b) for a, b in value.per_pair)
    assert value.count >= density(sample)


def test_n_pair_matches_brute_force():
    rng = np.random.default_rng(3)
    for _ in range(40):
        M = BinaryMatrix((rng.random((4, 5)) < 0.35).astype(np.uint8))
        ones = M.ones()
        for x in range(len(ones)):
            for y in range(x + 1, len(ones)):
                a, b = ones[x], ones[y]
                assert n_pair(M, a, b) == brute_pair(M, a, b), (M.tolist(), a, b)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 6), st.integers(2, 6), st.integers(0, 2**31))
def test_n_pair_symmetric(p, q, seed):
    M = random_instance(p, q, 0.4, seed)
    ones = M.ones()
    for k in range(len(ones) - 1):
        a, b = ones[k], ones[k + 1]
        assert n_pair(M, a, b) == n_pair(M, b, a)
