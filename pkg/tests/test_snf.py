from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from digerm.snf import SNFResult, check_snf, det, is_unimodular, matmul, snf
from oracles import det_fraction, invariant_factors_by_minors, random_matrix, rank_q


def test_zero_matrix():
    r = snf([[0, 0], [0, 0]])
    assert r.D == ((0, 0), (0, 0)) and r.rank == 0


def test_identity():
    r = snf([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert r.D == ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def test_two_by_two_example():
    r = snf([[2, 4], [6, 8]])
    assert r.diagonal == [2, 4]
    assert check_snf([[2, 4], [6, 8]], r) == []


def test_empty_shapes():
    r = snf([], shape=(0, 3))
    assert r.rank == 0
    r = snf([[], []], shape=(2, 0))
    assert r.rank == 0


def test_det_matches_fraction():
    rng = random.Random(3)
    for n in range(1, 8):
        A = random_matrix(rng, n, n)
        assert det(A) == det_fraction(A)


def test_unimodular_detection():
    assert is_unimodular([[2, 1], [1, 1]])
    assert not is_unimodular([[2, 0], [0, 1]])


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 2 ** 32))
def test_invariant_factors_match_minors(m, n, seed):
    A = random_matrix(random.Random(seed), m, n, -4, 4)
    r = snf(A)
    assert check_snf(A, r) == []
    nz = [d for d in r.diagonal if d]
    assert nz == invariant_factors_by_minors(A)
    assert r.rank == rank_q(A)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40), st.integers(1, 40), st.integers(0, 2 ** 32))
def test_large_postconditions(m, n, seed):
    A = random_matrix(random.Random(seed), m, n)
    r = snf(A)
    assert check_snf(A, r) == []
    assert matmul(matmul(r.U, A), r.V) == [list(row) for row in r.D]


def test_low_rank_products():
    rng = random.Random(11)
    for _ in range(20):
        B = random_matrix(rng, 12, 3, -3, 3)
        C = random_matrix(rng, 3, 15, -3, 3)
        A = matmul(B, C)
        r = snf(A)
        assert check_snf(A, r) == []
        assert r.rank == rank_q(A) <= 3


def test_check_snf_flags_bad_result():
    A = [[2, 4], [6, 8]]
    r = snf(A)
    assert check_snf(A, SNFResult(((2, 0), (0, 3)), r.U, r.V))
    assert check_snf(A, SNFResult(((4, 0), (0, 2)), r.U, r.V))


@pytest.mark.parametrize("n", [13, 20])
def test_unimodularity_above_determinant_cutoff(n):
    A = random_matrix(random.Random(n), n, n)
    r = snf(A)
    assert is_unimodular(r.U) and is_unimodular(r.V)
