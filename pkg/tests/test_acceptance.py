"""Acceptance gate.  Each criterion prints one PASS/FAIL line; the lines are
also collected and repeated in the pytest terminal summary.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import subprocess
import sys
import time

import numpy as np
import pytest

from divtop import verify
from divtop.asymptotics import face_dimension_histogram, modal_face_dimension, report_total_betti_delta, report_total_betti_delta_tilde
from divtop.sieve import build_tables, primorial_dim

RESULTS: dict[int, str] = {}


def report(num: int, title: str, ok: bool, detail: str, started: float) -> None:
    line = f"criterion {num} {'PASS' if ok else 'FAIL'}: {title} ({detail}; {time.perf_counter() - started:.1f}s)"
    RESULTS[num] = line
    print(line)
    assert ok, line


def _suite_detail(res) -> str:
    return "; ".join(res.failures[:3]) if res.failures else "0 failures"


def test_criterion_1_oracle_equivalence(million):
    t0 = time.perf_counter()
    res = verify.suite_homology(2000, million, threads=1)
    report(1, "formula, shifted count and SNF homology agree, torsion-free, n <= 2000", res.ok, _suite_detail(res), t0)


def test_criterion_2_euler_identities(million):
    t0 = time.perf_counter()
    res = verify.suite_euler(10**6, million)
    report(2, "M(n) and L(n) as alternating Betti sums, n <= 10^6", res.ok, _suite_detail(res), t0)


def test_criterion_3_mobius_inversion(million):
    t0 = time.perf_counter()
    res = verify.suite_inversion(10**6, million)
    report(3, "both square-dilation reconstructions exact, n <= 10^6", res.ok, _suite_detail(res), t0)


def test_criterion_4_counting_identities(million):
    t0 = time.perf_counter()
    res = verify.suite_lemma(10**6, million)
    report(4, "halving bijection and alternating expansions, x <= 10^6, all k", res.ok, _suite_detail(res), t0)


def test_criterion_5_shadow_inequalities(million):
    t0 = time.perf_counter()
    res = verify.suite_shadow(10**5, million)
    report(5, "shadow bounds n <= 10^5; face/Betti relations and truncated chi n <= 5000", res.ok, _suite_detail(res), t0)


def test_criterion_6_multicomplex(million):
    t0 = time.perf_counter()
    res = verify.suite_multicomplex(500, million)
    report(6, "divisor multicomplex homology equals wedge formula, n <= 500", res.ok, _suite_detail(res), t0)


def test_criterion_7_dimension_at_ten_million():
    t0 = time.perf_counter()
    n = 10**7
    tables = build_tables(n)
    hist = face_dimension_histogram(n, tables.table)
    dim = max(hist)
    modal = modal_face_dimension(n, tables.table)
    ok = dim == 7 and primorial_dim(n) == 7 and modal == 2
    report(7, "dim Delta_{10^7} = 7 and modal face dimension 2", ok, f"dim={dim}, primorial={primorial_dim(n)}, modal={modal}", t0)


def test_criterion_8_convergence(million):
    t0 = time.perf_counter()
    d_lo, d_hi = report_total_betti_delta([10**3, 10**6], million)
    t_lo, t_hi = report_total_betti_delta_tilde([10**3, 10**6], million)
    ok = d_hi.deviation < 0.01 and t_hi.deviation < 0.02 and d_hi.deviation < d_lo.deviation and t_hi.deviation < t_lo.deviation
    detail = (
        f"Delta {d_lo.deviation:.3g} -> {d_hi.deviation:.3g}, "
        f"DeltaTilde {t_lo.deviation:.3g} -> {t_hi.deviation:.3g}"
    )
    report(8, "total Betti ratios at 10^6 within 0.01 / 0.02 and improving on 10^3", ok, detail, t0)


def test_criterion_9_determinism():
    t0 = time.perf_counter()
    cmd = [sys.executable, "-m", "divtop", "verify", "--suite", "all", "--max-n", "2000"]
    runs = [subprocess.run(cmd, capture_output=True) for _ in range(2)]
    same = runs[0].stdout == runs[1].stdout and len(runs[0].stdout) > 0
    ok = same and all(r.returncode == 0 for r in runs)
    detail = f"{len(runs[0].stdout)} bytes, identical={same}, exit codes {[r.returncode for r in runs]}"
    report(9, "verify --suite all --max-n 2000 twice gives byte-identical reports", ok, detail, t0)
