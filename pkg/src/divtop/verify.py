"""Verification sweeps over ranges of n.

Each suite returns a :class:`SuiteResult` whose text rendering contains no
timings or other run-dependent data, so repeated runs are byte-identical.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .betti import (
    alternating_rows,
    betti_delta,
    betti_delta_shifted_count,
    betti_delta_table,
    betti_delta_tilde,
    betti_delta_tilde_table,
    prime_pi_table,
)
from .oracle import (
    DEFAULT_FACE_CAP,
    boundary_matrices,
    build_delta_complex,
    build_divisor_multicomplex,
    homology_betti,
    multicomplex_betti,
    verify_shifted,
)
from .shadow import chi_truncated_pair, shadow_bound_sweep, verify_fbeta_relations
from .sieve import NumberTables, build_tables, mobius_inversion_arrays, square_dilation_sum

SUITES = ("homology", "shifted", "euler", "inversion", "lemma", "shadow", "multicomplex")
MAX_FAILURE_LINES = 20

FBETA_CAP = 5000
MULTICOMPLEX_CAP = 500
EXHAUSTIVE_SHIFT_CAP = 300


@dataclass
class SuiteResult:
    name: str
    max_n: int
    checks: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def render(self) -> str:
        lines = [f"[{self.name}] max_n={self.max_n}"]
        lines += [f"  {c}" for c in self.checks]
        for msg in self.failures[:MAX_FAILURE_LINES]:
            lines.append(f"  FAIL {msg}")
        if len(self.failures) > MAX_FAILURE_LINES:
            lines.append(f"  ... {len(self.failures) - MAX_FAILURE_LINES} more failures")
        lines.append(f"  {'PASS' if self.ok else 'FAIL'} ({len(self.failures)} failures)")
        return "\n".join(lines)

    def as_dict(self) -> dict:
        return {"suite": self.name, "max_n": self.max_n, "ok": self.ok, "checks": self.checks, "failures": self.failures}


def _diff_betti(n: int, label: str, a, b, res: SuiteResult) -> bool:
    ks = sorted(set(a.values) | set(b.values))
    bad = [k for k in ks if a[k] != b[k]]
    for k in bad:
        res.fail(f"n={n} k={k}: {label} {a[k]} != {b[k]}")
    return not bad


def _homology_chunk(lo: int, hi: int, limit: int, face_cap: int) -> list[str]:
    tables = build_tables(limit)
    return _homology_range(lo, hi, tables, face_cap)


def _homology_range(lo: int, hi: int, tables: NumberTables, face_cap: int) -> list[str]:
    out: list[str] = []
    scratch = SuiteResult("homology", hi)
    for n in range(lo, hi + 1):
        formula = betti_delta(n, tables.counters)
        count = betti_delta_shifted_count(n, tables.table)
        cx = build_delta_complex(n, tables.table, face_cap)
        hom = homology_betti(cx, face_cap)
        _diff_betti(n, "formula vs shifted count", formula, count, scratch)
        _diff_betti(n, "formula vs SNF homology", formula, hom.betti, scratch)
        if not hom.torsion_free:
            scratch.fail(f"n={n}: torsion {dict(hom.torsion)}")
        if not boundary_matrices(cx).composition_is_zero():
            scratch.fail(f"n={n}: boundary composite is nonzero")
    out.extend(scratch.failures)
    return out


def suite_homology(max_n: int, tables: NumberTables, *, threads: int = 1, face_cap: int = DEFAULT_FACE_CAP) -> SuiteResult:
    res = SuiteResult("homology", max_n)
    if max_n >= 1:
        if threads > 1 and max_n > 200:
            edges = np.linspace(0, max_n, threads * 4 + 1).astype(int)
            chunks = [(int(a) + 1, int(b)) for a, b in zip(edges, edges[1:]) if b > a]
            with ProcessPoolExecutor(max_workers=threads) as pool:
                futures = [pool.submit(_homology_chunk, lo, hi, max_n, face_cap) for lo, hi in chunks]
                for fut in futures:
                    res.failures.extend(fut.result())
        else:
            res.failures.extend(_homology_range(1, max_n, tables, face_cap))
    res.checks.append(f"Betti vectors compared (formula, shifted count, SNF homology) for n in [1, {max_n}]")
    res.checks.append("torsion-free and boundary composites zero for every n")
    return res


def suite_shifted(max_n: int, tables: NumberTables, *, face_cap: int = DEFAULT_FACE_CAP) -> SuiteResult:
    res = SuiteResult("shifted", max_n)
    cap = min(max_n, EXHAUSTIVE_SHIFT_CAP)
    for n in range(1, max_n + 1):
        cx = build_delta_complex(n, tables.table, face_cap)
        if not verify_shifted(cx):
            res.fail(f"n={n}: Delta_n is not shifted")
        if n <= cap and not verify_shifted(cx, exhaustive=True):
            res.fail(f"n={n}: Delta_n fails the exhaustive shift test")
    res.checks.append(f"adjacent-swap shift test for n in [1, {max_n}]")
    res.checks.append(f"exhaustive shift test for n in [1, {cap}]")
    return res


def suite_euler(max_n: int, tables: NumberTables) -> SuiteResult:
    res = SuiteResult("euler", max_n)
    if max_n >= 1:
        B = betti_delta_table(tables.counters, max_n)
        BT = betti_delta_tilde_table(B, tables.table)
        M = tables.summatory.mertens[: max_n + 1]
        L = tables.summatory.liouville[: max_n + 1]
        n = np.arange(max_n + 1)

        _compare(res, "alternating Betti sum of Delta_n vs M(n)", alternating_rows(B)[1:], M[1:], n[1:])
        faces = np.zeros(max_n + 1, dtype=np.int64)
        for w in range(tables.counters.max_weight + 1):
            faces += (-1) ** w * tables.counters.prefix(w)[: max_n + 1].astype(np.int64)
        # M(n) = -(reduced chi) = -sum_j (-1)^j f_j with f_j = sigma_{j+1}
        _compare(res, "face alternating sum of Delta_n vs M(n)", faces[1:], M[1:], n[1:])
        _compare(res, "alternating Betti sum of DeltaTilde_n vs L(n)", alternating_rows(BT)[1:], L[1:], n[1:])
        lam = 1 - 2 * (tables.table.omega[: max_n + 1].astype(np.int64) & 1)
        lam[0] = 0
        cells = np.cumsum(-lam)  # each cell contributes (-1)^(Omega - 1)
        _compare(res, "cell count alternating sum vs -L(n)", cells[1:], -L[1:], n[1:])

        pi = prime_pi_table(tables.table, max_n)
        if max_n >= 4:
            # for n >= 4 the vertex 2 is not isolated, every prime in (n/2, n] is
            _compare(res, "beta_0(Delta_n) vs pi(n) - pi(n/2)", B[1, 4:], pi[4:] - pi[n[4:] // 2], n[4:])

        # the k = -1 class of Delta_1 lands in positive degree for r > 1
        _compare(
            res,
            "total Betti of DeltaTilde_n vs sum over squares",
            BT.sum(axis=0)[1:],
            square_dilation_sum(B.sum(axis=0))[1:],
            n[1:],
        )
    res.checks.append(f"M(n) = sum (-1)^(k-1) beta_k(Delta_n) for n in [1, {max_n}]")
    res.checks.append(f"L(n) = sum (-1)^(k-1) beta_k(DeltaTilde_n) for n in [1, {max_n}]")
    res.checks.append("face and cell alternating sums, beta_0 prime count, wedge totals")
    return res


def _compare(res: SuiteResult, label: str, got: np.ndarray, want: np.ndarray, n: np.ndarray) -> None:
    bad = np.flatnonzero(got != want)
    for i in bad[:MAX_FAILURE_LINES]:
        res.fail(f"n={int(n[i])}: {label}: {int(got[i])} != {int(want[i])}")
    if len(bad) > MAX_FAILURE_LINES:
        res.fail(f"{label}: {len(bad) - MAX_FAILURE_LINES} further mismatches")


def suite_inversion(max_n: int, tables: NumberTables) -> SuiteResult:
    res = SuiteResult("inversion", max_n)
    if max_n >= 1:
        l_from_m, m_from_l = mobius_inversion_arrays(tables.summatory, tables.table, max_n)
        n = np.arange(max_n + 1)
        _compare(res, "L(n) from Mertens values", l_from_m[1:], tables.summatory.liouville[1 : max_n + 1], n[1:])
        _compare(res, "M(n) from Liouville values", m_from_l[1:], tables.summatory.mertens[1 : max_n + 1], n[1:])
    res.checks.append(f"both square-dilation reconstructions for n in [1, {max_n}]")
    return res


def suite_lemma(max_n: int, tables: NumberTables) -> SuiteResult:
    res = SuiteResult("lemma", max_n)
    if max_n >= 1:
        c = tables.counters
        x = np.arange(max_n + 1)
        W = c.max_weight
        for k in range(0, W + 2):
            even = c.prefix(k, "even")[: max_n + 1].astype(np.int64) if k <= W else np.zeros(max_n + 1, np.int64)
            shifted = c.prefix(k - 1, "odd")[x // 2].astype(np.int64) if 0 <= k - 1 <= W else np.zeros(max_n + 1, np.int64)
            _compare(res, f"sigma_{k}^even(x) vs sigma_{k - 1}^odd(x/2)", even[1:], shifted[1:], x[1:])
        for k in range(0, W + 1):
            alt = np.zeros(max_n + 1, dtype=np.int64)
            for i in range(0, k + 1):
                alt += (-1) ** i * c.prefix(k - i)[x >> i].astype(np.int64)
            _compare(res, f"sigma_{k}^odd alternating expansion", alt[1:], c.prefix(k, "odd")[1 : max_n + 1], x[1:])
        alt = np.zeros(max_n + 1, dtype=np.int64)
        for i in range(0, max_n.bit_length() + 1):
            alt += (-1) ** i * c.sigma(x >> i)
        _compare(res, "sigma^odd alternating expansion", alt[1:], c.sigma_odd(x)[1:], x[1:])
        _compare(res, "sigma = odd + even", c.sigma(x)[1:], (c.sigma_odd(x) + c.sigma_even(x))[1:], x[1:])
    res.checks.append(f"halving bijection and alternating expansions for x in [1, {max_n}], all weights")
    return res


def suite_shadow(max_n: int, tables: NumberTables) -> SuiteResult:
    res = SuiteResult("shadow", max_n)
    if max_n >= 1:
        for s in shadow_bound_sweep(tables.counters, max_n):
            for n in s.violations:
                res.fail(f"n={n} k={s.k}: {s.label} shadow bound violated")
        fb = min(max_n, FBETA_CAP)
        for n in range(1, fb + 1):
            rep = verify_fbeta_relations(n, tables.counters)
            for row in rep.violations():
                res.fail(f"n={n} k={row.k}: {row.label} {row.lhs} > {row.rhs}")
            res.failures.extend(rep.identity_failures)
            for k in range(0, tables.counters.max_weight + 2):
                alt, closed = chi_truncated_pair(n, k, tables.counters)
                if alt != closed:
                    res.fail(f"n={n} k={k}: truncated chi {alt} != {closed}")
        res.checks.append(f"odd-count shadow bounds for n in [1, {max_n}], k in [1, {tables.counters.max_weight + 1}]")
        res.checks.append(f"face/Betti shadow relations and truncated chi for n in [1, {fb}]")
    return res


def suite_multicomplex(max_n: int, tables: NumberTables, *, face_cap: int = DEFAULT_FACE_CAP) -> SuiteResult:
    res = SuiteResult("multicomplex", max_n)
    cap = min(max_n, MULTICOMPLEX_CAP)
    for n in range(1, cap + 1):
        mc = build_divisor_multicomplex(n, tables.table)
        got = multicomplex_betti(mc, face_cap, n=n)
        want = betti_delta_tilde(n, tables.counters, tables.table)
        _diff_betti(n, "multicomplex oracle vs wedge formula", got, want, res)
    res.checks.append(f"divisor multicomplex homology vs wedge formula for n in [1, {cap}]")
    return res


def run_suite(name: str, max_n: int, *, threads: int = 1, face_cap: int = DEFAULT_FACE_CAP, tables: NumberTables | None = None) -> list[SuiteResult]:
    names = SUITES if name == "all" else (name,)
    for s in names:
        if s not in SUITES:
            raise ValueError(f"unknown suite {s!r}; choose from {SUITES + ('all',)}")
    if tables is None or tables.limit < max(max_n, 1):
        tables = build_tables(max(max_n, 1))
    out = []
    for s in names:
        if s == "homology":
            out.append(suite_homology(max_n, tables, threads=threads, face_cap=face_cap))
        elif s == "shifted":
            out.append(suite_shifted(max_n, tables, face_cap=face_cap))
        elif s == "euler":
            out.append(suite_euler(max_n, tables))
        elif s == "inversion":
            out.append(suite_inversion(max_n, tables))
        elif s == "lemma":
            out.append(suite_lemma(max_n, tables))
        elif s == "shadow":
            out.append(suite_shadow(max_n, tables))
        elif s == "multicomplex":
            out.append(suite_multicomplex(max_n, tables, face_cap=face_cap))
    return out


def render(results: list[SuiteResult]) -> str:
    body = "\n".join(r.render() for r in results)
    ok = all(r.ok for r in results)
    return body + f"\nOVERALL {'PASS' if ok else 'FAIL'}\n"
