import json
import math

import pytest

from divtop.asymptotics import (
    CSV_FIELDS,
    ConvergenceRow,
    face_dimension_histogram,
    landau_term,
    modal_face_dimension,
    report_fixed_k_betti,
    report_growth_traces,
    report_parity_betti,
    report_sqfree_density,
    report_total_betti_delta,
    report_total_betti_delta_tilde,
    rows_from_csv,
    rows_to_csv,
    rows_to_json,
    run_report,
)
from divtop.sieve import build_tables

T = build_tables(5000)


def test_total_delta_ten():
    (row,) = report_total_betti_delta([10], T)
    assert row.measured == 1
    assert row.predicted == pytest.approx(2.0264, abs=1e-4)
    assert row.ratio == pytest.approx(0.4935, abs=1e-3)


def test_deviation_shrinks(million):
    ns = [10**3, 10**4, 10**5, 10**6]
    for rows in (report_total_betti_delta(ns, million), report_total_betti_delta_tilde(ns, million)):
        devs = [r.deviation for r in rows]
        assert all(a > b for a, b in zip(devs, devs[1:])), devs


def test_delta_tilde_small_and_degenerate():
    (r4,) = report_total_betti_delta_tilde([4], T)
    assert r4.measured == 2 and r4.predicted == pytest.approx(4 / 3)
    (r1,) = report_total_betti_delta_tilde([1], T)
    assert r1.degenerate


def test_parity_rows():
    rows = report_parity_betti([10], T)
    assert [r.measured for r in rows] == [1, 0]
    with pytest.raises(ValueError):
        report_parity_betti([10], T, "other")


def test_fixed_k(million):
    (r,) = report_fixed_k_betti(0, [10], T)
    assert r.measured == 1
    (big,) = report_fixed_k_betti(0, [10**6], million)
    primes = million.table.primes(10**6)
    assert big.measured == int((primes > 5 * 10**5).sum())
    assert big.predicted == pytest.approx(10**6 / (2 * math.log(10**6)))
    assert landau_term(2, 1) == 0.0


def test_growth(million):
    rows = report_growth_traces([1, 10**6], million)
    by = {(r.quantity, r.n): r for r in rows}
    assert by[("mertens_over_sqrt", 1)].ratio == 1.0
    assert by[("mertens_over_sqrt", 10**6)].ratio == pytest.approx(0.212)
    assert abs(by[("liouville_over_n", 10**6)].ratio) < 1e-3


def test_growth_from_streamed_values():
    rows = report_growth_traces([100], None, {100: (1, -2)})
    assert rows[0].measured == 1 and rows[1].measured == -2


def test_sqfree_density():
    rows = report_sqfree_density([10], T)
    assert rows[0].measured == 7
    assert T.counters.sigma(0.5) == 0


def test_face_histogram():
    assert face_dimension_histogram(10, T.table) == {0: 4, 1: 2}  # empty face excluded
    assert modal_face_dimension(10, T.table) == 0


def test_csv_json_encode_same_values(million):
    rows = run_report("total-delta", [10, 1000, 10**6], million) + run_report("growth", [1, 7], million)
    text = rows_to_csv(rows)
    assert text.splitlines()[0] == ",".join(CSV_FIELDS)
    back = rows_from_csv(text)
    assert back == rows
    doc = json.loads(rows_to_json(rows))
    assert [ConvergenceRow(**d) for d in doc] == rows


def test_unknown_report():
    with pytest.raises(ValueError):
        run_report("nope", [10], T)
