import numpy as np
import pytest

from divtop import verify
from divtop.sieve import build_tables


def test_parallel_matches_sequential():
    tables = build_tables(400)
    seq = verify.run_suite("homology", 400, threads=1, tables=tables)
    par = verify.run_suite("homology", 400, threads=2, tables=tables)
    assert verify.render(seq) == verify.render(par)


def test_all_suites_small():
    results = verify.run_suite("all", 300)
    assert [r.name for r in results] == list(verify.SUITES)
    assert all(r.ok for r in results)
    assert verify.render(results).endswith("OVERALL PASS\n")


def test_unknown_suite():
    with pytest.raises(ValueError):
        verify.run_suite("bogus", 10)


def test_failure_lines_name_both_sides():
    res = verify.SuiteResult("x", 5)
    verify._compare(res, "lhs vs rhs", np.array([1, 2, 3]), np.array([1, 5, 3]), np.array([1, 2, 3]))
    assert res.failures == ["n=2: lhs vs rhs: 2 != 5"]
    assert "FAIL (1 failures)" in res.render()
