import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divtop.sieve import (
    RangeError,
    SieveBudgetError,
    SummatoryTables,
    WeightCounters,
    build_sieve,
    build_tables,
    direct_mu,
    direct_omega,
    liouville_summatory,
    mertens,
    mobius_inversion_arrays,
    mobius_inversion_pair,
    primorial_dim,
    segmented_summatory,
    square_dilation_sum,
)


def test_limit_one():
    t = build_sieve(1)
    assert t.omega[1] == 0 and t.mu[1] == 1 and t.sqfree[1]


def test_twelve():
    t = build_sieve(12)
    assert t.omega[12] == 3
    assert t.mu[12] == 0
    assert not t.sqfree[12]


def test_mobius_first_ten():
    t = build_sieve(10)
    assert t.mu[1:11].tolist() == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_bad_limits():
    with pytest.raises(SieveBudgetError):
        build_sieve(0)
    with pytest.raises(SieveBudgetError):
        build_sieve(1000, budget=999)


def test_tables_are_read_only():
    t = build_sieve(50)
    with pytest.raises(ValueError):
        t.mu[3] = 7


def test_against_trial_division(small):
    t = small.table
    for k in range(1, 5001):
        assert t.omega[k] == direct_omega(k)
        assert t.mu[k] == direct_mu(k)


def test_segmented_matches_monolithic():
    whole = build_sieve(200_000)
    for seg, threads in ((1000, 1), (4096, 3), (65_537, 2)):
        parts = build_sieve(200_000, segment_length=seg, threads=threads)
        for name in ("lpf", "omega", "mu", "sqfree"):
            assert np.array_equal(getattr(whole, name), getattr(parts, name)), (name, seg)


def test_factorize_roundtrip(small):
    for k in (1, 2, 12, 165, 4096, 4999):
        assert math.prod(p**e for p, e in small.table.factorize(k)) == k


def test_weight_counters_small():
    c = WeightCounters(build_sieve(10))
    assert c.sigma_k_odd(1, 10) == 3
    assert c.sigma_k_odd(2, 10) == 0
    assert c.sigma(0.5) == 0
    assert c.sigma(10) == 7
    assert c.sigma_k(2, 10) == 2  # 6, 10
    assert c.sigma_k(40, 10) == 0
    with pytest.raises(RangeError):
        c.sigma(11)


def test_counters_floor_and_arrays(small):
    c = small.counters
    assert c.sigma(10.9) == c.sigma(10)
    xs = np.array([0, 1, 10, 100])
    assert c.sigma_odd(xs).tolist() == [c.sigma_odd(int(x)) for x in xs]


def test_counter_limit_below_table():
    t = build_sieve(100)
    c = WeightCounters(t, 50)
    assert c.sigma(50) == 31
    with pytest.raises(RangeError):
        c.sigma(51)


def test_summatory_examples():
    tables = SummatoryTables.from_sieve(build_sieve(10))
    assert [mertens(n, tables) for n in (1, 2, 3)] == [1, 0, -1]
    assert [liouville_summatory(n, tables) for n in (1, 2, 4)] == [1, 0, 0]
    assert mertens(0, tables) == 0 and mertens(-5, tables) == 0
    assert liouville_summatory(0, tables) == 0
    with pytest.raises(RangeError):
        mertens(11, tables)


def test_known_mertens_values(million):
    s = million.summatory
    # standard tabulated values
    assert mertens(100, s) == 1
    assert mertens(1000, s) == 2
    assert mertens(10**6, s) == 212
    assert liouville_summatory(10**6, s) == -530


def test_cache_roundtrip(tmp_path):
    tables = SummatoryTables.from_sieve(build_sieve(3000))
    path = tmp_path / "m.bin"
    tables.save(path)
    back = SummatoryTables.load(path)
    assert back.limit == 3000
    assert np.array_equal(back.mertens, tables.mertens)
    assert np.array_equal(back.liouville, tables.liouville)
    raw = path.read_bytes()
    assert raw[:4] == b"DVT1" and len(raw) == 4 + 8 + 16 * 3001


def test_cache_rejects_garbage(tmp_path):
    path = tmp_path / "bad.bin"
    path.write_bytes(b"XXXX" + bytes(20))
    with pytest.raises(ValueError):
        SummatoryTables.load(path)


@pytest.mark.parametrize("n,dim", [(6, 1), (10**7, 7), (10**80, 44), (1, -1), (2, 0), (5, 0), (29, 1), (30, 2)])
def test_primorial_dim(n, dim):
    assert primorial_dim(n) == dim


def test_primorial_dim_domain():
    with pytest.raises(ValueError):
        primorial_dim(0)


def test_mobius_inversion_examples(small):
    l4, m4 = mobius_inversion_pair(4, small.summatory, small.table)
    assert l4 == 0 and m4 == mertens(4, small.summatory)
    l100, m100 = mobius_inversion_pair(100, small.summatory, small.table)
    assert l100 == liouville_summatory(100, small.summatory)
    assert m100 == mertens(100, small.summatory)


def test_mobius_inversion_arrays_match_scalar(small):
    lm, ml = mobius_inversion_arrays(small.summatory, small.table, 3000)
    for n in (1, 2, 17, 999, 3000):
        assert (lm[n], ml[n]) == mobius_inversion_pair(n, small.summatory, small.table)


def test_square_dilation_against_loop():
    rng = np.random.default_rng(7)
    vals = rng.integers(-5, 5, 400)
    vals[0] = 0
    coeffs = rng.integers(-2, 3, 400)
    got = square_dilation_sum(vals, coeffs)
    for n in range(1, 400):
        want = sum(int(coeffs[r]) * int(vals[n // (r * r)]) for r in range(1, math.isqrt(n) + 1))
        assert got[n] == want


def test_streaming_summatory(million):
    pts = [1, 7, 4095, 4096, 4097, 10**5, 10**6]
    got = segmented_summatory(10**6, pts, segment_length=4096)
    for p in pts:
        assert got[p] == (mertens(p, million.summatory), liouville_summatory(p, million.summatory))
    with pytest.raises(RangeError):
        segmented_summatory(100, [101])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5000))
def test_halving_bijection(x):
    c = build_tables_cached().counters
    for k in range(0, c.max_weight + 2):
        assert c.sigma_k_even(k, x) == c.sigma_k_odd(k - 1, x // 2)


_CACHE = {}


def build_tables_cached():
    if "t" not in _CACHE:
        _CACHE["t"] = build_tables(5000)
    return _CACHE["t"]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5000))
def test_weight_counts_partition(x):
    c = build_tables_cached().counters
    assert sum(c.sigma_k(k, x) for k in range(c.max_weight + 1)) == c.sigma(x)
    assert c.sigma(x) == c.sigma_odd(x) + c.sigma_even(x)
