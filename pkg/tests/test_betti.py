import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divtop.betti import (
    BettiVector,
    Method,
    alternating_rows,
    betti_delta,
    betti_delta_shifted_count,
    betti_delta_table,
    betti_delta_tilde,
    betti_delta_tilde_table,
    cell_dimension_counts,
    euler_check_delta,
    euler_check_delta_tilde,
    f_vector_delta,
    parity_sums,
)
from divtop.sieve import build_tables, liouville_summatory, mertens

T = build_tables(5000)


def test_betti_ten():
    b = betti_delta(10, T.counters)
    assert b.values == {0: 1}


def test_betti_one():
    assert betti_delta(1, T.counters).values == {-1: 1}
    assert betti_delta_shifted_count(1, T.table).values == {-1: 1}


def test_shifted_count_examples():
    assert betti_delta_shifted_count(10, T.table)[0] == 1
    assert betti_delta_shifted_count(30, T.table)[1] == 1


def test_vectors_compare_values_not_method():
    a = BettiVector(5, {0: 2, 3: 0}, Method.FORMULA)
    b = BettiVector(5, {0: 2}, Method.SHIFTED_COUNT)
    assert a == b
    assert a.as_list() == [0, 2]


def test_bad_betti_vector():
    with pytest.raises(ValueError):
        BettiVector(1, {-2: 1})
    with pytest.raises(ValueError):
        BettiVector(1, {0: -1})


def test_f_vector_examples():
    f = f_vector_delta(10, T.counters)
    assert (f[-1], f[0], f[1], f[2]) == (1, 4, 2, 0)
    f1 = f_vector_delta(1, T.counters)
    assert f1.f == {-1: 1} and f1.dim == -1
    assert f_vector_delta(30, T.counters)[2] == 1


def test_euler_three():
    rep = euler_check_delta(3, T)
    assert betti_delta(3, T.counters)[0] == 1
    assert rep.expected == -1 and rep.ok


def test_delta_tilde_small():
    assert betti_delta_tilde(3, T.counters, T.table) == betti_delta(3, T.counters)
    b4 = betti_delta_tilde(4, T.counters, T.table)
    assert b4[1] == 1
    assert b4[0] == betti_delta(4, T.counters)[0]


def test_delta_tilde_hundred_double_sum():
    total = betti_delta_tilde(100, T.counters, T.table).total(-1)
    want = sum(betti_delta(100 // (r * r), T.counters).total(-1) for r in range(1, 11))
    assert total == want


def test_cell_complex_euler():
    assert cell_dimension_counts(2, T.table) == {-1: 1, 0: 1}
    for n in (2, 4, 1000, 5000):
        rep = euler_check_delta_tilde(n, T)
        assert rep.ok, rep
    assert liouville_summatory(4, T.summatory) == 0
    assert betti_delta_tilde(4, T.counters, T.table).euler_sum() == 0


def test_parity_sums_examples():
    assert parity_sums(betti_delta(10, T.counters)) == (1, 0)
    assert parity_sums(betti_delta(2, T.counters)) == (0, 0)


def test_parity_gap_is_mertens(million):
    even, odd = parity_sums(betti_delta(10**5, million.counters))
    assert abs(even - odd) == abs(mertens(10**5, million.summatory))


def test_tables_match_scalar():
    B = betti_delta_table(T.counters, 2000)
    BT = betti_delta_tilde_table(B, T.table)
    for n in (1, 2, 4, 64, 999, 2000):
        assert BettiVector(n, {k - 1: int(B[k, n]) for k in range(B.shape[0])}) == betti_delta(n, T.counters)
        assert BettiVector(n, {k - 1: int(BT[k, n]) for k in range(BT.shape[0])}) == betti_delta_tilde(
            n, T.counters, T.table
        )
    assert np.array_equal(alternating_rows(B)[1:], T.summatory.mertens[1:2001])
    assert np.array_equal(alternating_rows(BT)[1:], T.summatory.liouville[1:2001])


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5000))
def test_formula_equals_count(n):
    assert betti_delta(n, T.counters) == betti_delta_shifted_count(n, T.table)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5000))
def test_euler_identities(n):
    assert betti_delta(n, T.counters).euler_sum() == mertens(n, T.summatory)
    assert betti_delta_tilde(n, T.counters, T.table).euler_sum() == liouville_summatory(n, T.summatory)
    assert euler_check_delta(n, T).ok


@settings(max_examples=100, deadline=None)
@given(st.integers(4, 5000))
def test_beta0_counts_large_primes(n):
    primes = T.table.primes(n)
    assert betti_delta(n, T.counters)[0] == int(np.sum(primes > n // 2))


def test_dimension_is_primorial(million):
    from divtop.sieve import primorial_dim

    for n in (1, 2, 6, 29, 30, 209, 210, 2310, 30030, 10**6):
        assert f_vector_delta(n, million.counters).dim == primorial_dim(n)
    assert math.prod((2, 3, 5, 7, 11, 13, 17)) == 510510
