from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divtop.betti import IdentityError
from divtop.shadow import (
    CascadeRep,
    admissible_ks,
    cascade,
    chi_truncated,
    chi_truncated_pair,
    lower_shadow,
    shadow_bound_sweep,
    upper_shadow,
    verify_fbeta_relations,
    verify_shadow_bounds,
)
from divtop.sieve import build_tables

T = build_tables(5000)


def test_cascade_examples():
    assert cascade(5, 2).digits == ((3, 2), (2, 1))
    assert cascade(0, 3).digits == ()
    assert cascade(10, 3).digits == ((5, 3),)


def test_shadow_examples():
    assert lower_shadow(5, 2) == 4
    assert upper_shadow(5, 2) == 3
    assert lower_shadow(10, 3) == 10
    assert upper_shadow(10, 3) == 6
    assert lower_shadow(0, 4) == 0 and upper_shadow(0, 4) == 0


def test_cascade_domain():
    with pytest.raises(ValueError):
        cascade(-1, 2)
    with pytest.raises(ValueError):
        cascade(3, 0)


@settings(max_examples=400, deadline=None)
@given(st.integers(0, 10**7), st.integers(1, 9))
def test_cascade_is_valid_and_unique(n, k):
    rep = cascade(n, k)
    assert rep.is_valid()
    assert rep.value() == n


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 3000), st.integers(1, 6))
def test_shadows_monotone(n, k):
    assert lower_shadow(n, k) <= lower_shadow(n + 1, k)
    assert upper_shadow(n, k) <= upper_shadow(n + 1, k)
    assert upper_shadow(n, k) <= lower_shadow(n, k)


def _brute_lower_shadow(m, k):
    """Size of the shadow of the first m k-sets in colex order."""
    import itertools

    sets = sorted(itertools.combinations(range(k + 12), k), key=lambda s: tuple(reversed(s)))[:m]
    return len({s[:i] + s[i + 1 :] for s in sets for i in range(k)})


@pytest.mark.parametrize("k", [2, 3])
def test_lower_shadow_is_kruskal_katona_minimum(k):
    for m in range(0, 60):
        assert lower_shadow(m, k) == _brute_lower_shadow(m, k)


def test_invalid_cascade_detected():
    assert not CascadeRep(5, 2, ((2, 2), (2, 1))).is_valid()


def test_shadow_bounds_small():
    rep = verify_shadow_bounds(10, T.counters)
    row = next(r for r in rep.rows if r.k == 1 and r.label == "lower")
    assert (row.lhs, row.rhs) == (0, 2)
    assert rep.ok
    assert list(admissible_ks(T.counters)) == list(range(1, T.counters.max_weight + 2))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5000))
def test_shadow_bounds_holds(n):
    assert verify_shadow_bounds(n, T.counters).ok


def test_sweep_agrees_with_scalar():
    sweep = shadow_bound_sweep(T.counters, 1000)
    assert all(not s.violations for s in sweep)
    slack = {}
    for n in range(1, 1001):
        for r in verify_shadow_bounds(n, T.counters).rows:
            key = (r.label, r.k)
            slack[key] = min(slack.get(key, r.slack), r.slack)
    assert {(s.label, s.k): s.min_slack for s in sweep} == slack


def test_chi_examples():
    assert chi_truncated(10, 1, T.counters) == 2
    for k in range(1, 6):
        assert chi_truncated(1, k, T.counters) == 0
    alt, closed = chi_truncated_pair(300, 2, T.counters)
    assert alt == closed


def test_chi_identity_error_type():
    assert issubclass(IdentityError, AssertionError)


def test_fbeta_examples():
    rep = verify_fbeta_relations(10, T.counters)
    row = next(r for r in rep.rows if r.k == 1 and r.label == "fb-lower")
    assert (row.lhs, row.rhs) == (0, 2)
    rep2 = verify_fbeta_relations(2, T.counters)
    assert all(r.lhs == 0 and r.rhs == 0 for r in rep2.rows)
    assert rep.ok and rep2.ok


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 5000))
def test_fbeta_holds(n):
    rep = verify_fbeta_relations(n, T.counters)
    assert rep.ok, (rep.violations(), rep.identity_failures)
