"""Measured-versus-leading-term tables for the growth laws of the divisor complexes.

Measured values are exact integers; the leading terms are evaluated in
double precision and the ratio is taken last.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from .betti import betti_delta, betti_delta_tilde, parity_sums
from .sieve import NumberTables, SieveTable, liouville_summatory, mertens

PI2 = math.pi**2
CSV_FIELDS = ("quantity", "n", "measured", "predicted", "ratio", "residual")


@dataclass(frozen=True)
class ConvergenceRow:
    quantity: str
    n: int
    measured: int | float
    predicted: float
    ratio: float
    residual: float

    @classmethod
    def make(cls, quantity: str, n: int, measured, predicted: float) -> "ConvergenceRow":
        ratio = measured / predicted if predicted else float("nan")
        return cls(quantity, int(n), measured, float(predicted), float(ratio), float(measured - predicted))

    @property
    def degenerate(self) -> bool:
        """No meaningful ratio: nothing measured yet, or a nonpositive leading term."""
        return self.measured == 0 or not self.predicted > 0

    @property
    def deviation(self) -> float:
        return abs(self.ratio - 1.0)


def rows_to_csv(rows: Iterable[ConvergenceRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        w.writerow([r.quantity, r.n, r.measured, repr(r.predicted), repr(r.ratio), repr(r.residual)])
    return buf.getvalue()


def rows_to_json(rows: Iterable[ConvergenceRow]) -> str:
    def enc(r: ConvergenceRow) -> dict:
        d = asdict(r)
        for key in ("predicted", "ratio", "residual"):
            if not math.isfinite(d[key]):
                d[key] = repr(d[key])
        return d

    return json.dumps([enc(r) for r in rows], indent=1) + "\n"


def rows_from_csv(text: str) -> list[ConvergenceRow]:
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        measured = float(rec["measured"]) if "." in rec["measured"] else int(rec["measured"])
        out.append(
            ConvergenceRow(
                rec["quantity"],
                int(rec["n"]),
                measured,
                float(rec["predicted"]),
                float(rec["ratio"]),
                float(rec["residual"]),
            )
        )
    return out


def report_total_betti_delta(ns: Sequence[int], tables: NumberTables) -> list[ConvergenceRow]:
    return [
        ConvergenceRow.make("total_betti_delta", n, betti_delta(n, tables.counters).total(0), 2 * n / PI2)
        for n in ns
    ]


def report_total_betti_delta_tilde(ns: Sequence[int], tables: NumberTables) -> list[ConvergenceRow]:
    return [
        ConvergenceRow.make(
            "total_betti_delta_tilde", n, betti_delta_tilde(n, tables.counters, tables.table).total(0), n / 3
        )
        for n in ns
    ]


def report_parity_betti(ns: Sequence[int], tables: NumberTables, which: str = "delta") -> list[ConvergenceRow]:
    if which not in ("delta", "delta_tilde"):
        raise ValueError(f"which must be 'delta' or 'delta_tilde', got {which!r}")
    rows = []
    for n in ns:
        if which == "delta":
            bv = betti_delta(n, tables.counters)
            lead = n / PI2
        else:
            bv = betti_delta_tilde(n, tables.counters, tables.table)
            lead = n / 6
        even, odd = parity_sums(bv)
        rows.append(ConvergenceRow.make(f"even_betti_{which}", n, even, lead))
        rows.append(ConvergenceRow.make(f"odd_betti_{which}", n, odd, lead))
    return rows


def landau_term(n: int, k: int) -> float:
    """``n / (2 log n) * (log log n)^k / k!``; nonpositive when ``log log n <= 0``."""
    if n < 3:
        return 0.0
    ll = math.log(math.log(n))
    return n / (2 * math.log(n)) * ll**k / math.factorial(k)


def report_fixed_k_betti(k: int, ns: Sequence[int], tables: NumberTables) -> list[ConvergenceRow]:
    """Single Betti number against its Landau-type leading term (slow, report only)."""
    return [
        ConvergenceRow.make(f"betti_{k}_delta", n, betti_delta(n, tables.counters)[k], landau_term(n, k)) for n in ns
    ]


def report_growth_traces(
    ns: Sequence[int],
    tables: NumberTables | None = None,
    values: dict[int, tuple[int, int]] | None = None,
) -> list[ConvergenceRow]:
    """``M(n)`` and ``L(n)`` scaled by ``sqrt(n)`` and by ``n``.

    ``values`` may supply ``{n: (M, L)}`` from a streaming sieve for ``n``
    beyond the tables.
    """
    rows = []
    for n in ns:
        if values is not None and n in values:
            m, l = values[n]
        else:
            m = mertens(n, tables.summatory)
            l = liouville_summatory(n, tables.summatory)
        root = math.sqrt(n)
        rows.append(ConvergenceRow.make("mertens_over_sqrt", n, m, root))
        rows.append(ConvergenceRow.make("liouville_over_sqrt", n, l, root))
        rows.append(ConvergenceRow.make("mertens_over_n", n, m, float(n)))
        rows.append(ConvergenceRow.make("liouville_over_n", n, l, float(n)))
    return rows


def face_dimension_histogram(n: int, table: SieveTable) -> dict[int, int]:
    """Faces of ``Delta_n`` by dimension, empty face excluded."""
    table.check(n)
    w = table.omega[1 : n + 1][table.sqfree[1 : n + 1]]
    hist = np.bincount(w)
    return {d - 1: int(c) for d, c in enumerate(hist) if d >= 1 and c}


def modal_face_dimension(n: int, table: SieveTable) -> int:
    hist = face_dimension_histogram(n, table)
    if not hist:
        return -1
    return max(hist, key=lambda d: (hist[d], -d))


def report_sqfree_density(ns: Sequence[int], tables: NumberTables) -> list[ConvergenceRow]:
    """``sigma(n)`` against ``6n / pi^2``, plus the most common face dimension against ``floor(log log n)``."""
    rows = []
    for n in ns:
        rows.append(ConvergenceRow.make("sqfree_count", n, tables.counters.sigma(n), 6 * n / PI2))
    for n in ns:
        if n < 1:
            continue
        typical = math.floor(math.log(math.log(n))) if n >= 3 else 0
        rows.append(ConvergenceRow.make("modal_face_dim", n, modal_face_dimension(int(n), tables.table), float(typical)))
    return rows


REPORTS = (
    "total-delta",
    "total-delta-tilde",
    "parity-delta",
    "parity-delta-tilde",
    "fixed-k",
    "growth",
    "sqfree-density",
)


def run_report(name: str, ns: Sequence[int], tables: NumberTables, *, k: int = 0, values=None) -> list[ConvergenceRow]:
    if name == "total-delta":
        return report_total_betti_delta(ns, tables)
    if name == "total-delta-tilde":
        return report_total_betti_delta_tilde(ns, tables)
    if name == "parity-delta":
        return report_parity_betti(ns, tables, "delta")
    if name == "parity-delta-tilde":
        return report_parity_betti(ns, tables, "delta_tilde")
    if name == "fixed-k":
        return report_fixed_k_betti(k, ns, tables)
    if name == "growth":
        return report_growth_traces(ns, tables, values)
    if name == "sqfree-density":
        return report_sqfree_density(ns, tables)
    raise ValueError(f"unknown report {name!r}; choose from {sorted(REPORTS)}")


__all__ = [
    "ConvergenceRow",
    "CSV_FIELDS",
    "rows_to_csv",
    "rows_to_json",
    "rows_from_csv",
    "report_total_betti_delta",
    "report_total_betti_delta_tilde",
    "report_parity_betti",
    "report_fixed_k_betti",
    "report_growth_traces",
    "report_sqfree_density",
    "landau_term",
    "face_dimension_histogram",
    "modal_face_dimension",
    "run_report",
    "REPORTS",
]
