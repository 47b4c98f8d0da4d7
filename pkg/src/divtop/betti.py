"""Closed-form Betti numbers, f-vectors and Euler identities for the divisor complexes.

``Delta_n`` is the simplicial complex of prime supports of squarefree
integers ``<= n``; ``DeltaTilde_n`` is the cell complex with one cell of
dimension ``Omega(k) - 1`` per integer ``k <= n``.

Sign convention: every alternating sum here is
``sum_{k >= -1} (-1)^(k-1) * beta_k``, which equals ``M(n)`` on ``Delta_n``
and ``L(n)`` on ``DeltaTilde_n`` for all ``n >= 1`` (the ``k = -1`` term
only matters at ``n = 1``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .sieve import (
    NumberTables,
    SieveTable,
    WeightCounters,
    liouville_summatory,
    mertens,
    square_dilation_sum,
)


class Method(enum.Enum):
    FORMULA = "formula"
    SHIFTED_COUNT = "shifted-count"
    HOMOLOGY_ORACLE = "homology-oracle"
    WEDGE_SPLIT = "wedge-split"


class IdentityError(AssertionError):
    """Two evaluations of the same quantity disagree."""


@dataclass(frozen=True)
class BettiVector:
    """Reduced Betti numbers ``k -> beta_k`` for ``k >= -1``; zeros are dropped."""

    n: int
    values: Mapping[int, int] = field(compare=True)
    method: Method = field(default=Method.FORMULA, compare=False)

    def __post_init__(self):
        clean = {int(k): int(v) for k, v in sorted(self.values.items()) if v}
        if any(k < -1 for k in clean):
            raise ValueError("Betti indices start at -1")
        if any(v < 0 for v in clean.values()):
            raise ValueError("Betti numbers are nonnegative")
        object.__setattr__(self, "values", clean)

    def __getitem__(self, k: int) -> int:
        return self.values.get(k, 0)

    @property
    def top(self) -> int:
        return max(self.values, default=-2)

    def total(self, start: int = 0) -> int:
        return sum(v for k, v in self.values.items() if k >= start)

    def euler_sum(self) -> int:
        """``sum_k (-1)^(k-1) beta_k`` over ``k >= -1``."""
        return sum(v if (k - 1) % 2 == 0 else -v for k, v in self.values.items())

    def as_list(self, hi: int | None = None) -> list[int]:
        hi = self.top if hi is None else hi
        return [self[k] for k in range(-1, hi + 1)]


@dataclass(frozen=True)
class FVector:
    """Face numbers ``j -> f_j`` for ``j >= -1`` (``f_{-1} = 1``, the empty face)."""

    n: int
    f: Mapping[int, int]

    def __getitem__(self, j: int) -> int:
        return self.f.get(j, 0)

    @property
    def dim(self) -> int:
        return max(self.f)


def betti_delta(n: int, counters: WeightCounters) -> BettiVector:
    """Betti numbers of ``Delta_n`` from odd squarefree counts: ``sigma^odd_{k+1}(n) - sigma^odd_{k+1}(n/2)``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    vals = {}
    for w in range(counters.max_weight + 1):
        vals[w - 1] = counters.sigma_k_odd(w, n) - counters.sigma_k_odd(w, n // 2)
    return BettiVector(n, vals, Method.FORMULA)


def betti_delta_shifted_count(n: int, table: SieveTable) -> BettiVector:
    """Count odd squarefree ``b <= n`` with ``2b > n``, grouped by ``Omega(b) - 1``.

    This is the shifted-complex rule applied to ``Delta_n`` with vertex 2
    first; it reads the sieve directly and shares no code with
    :func:`betti_delta`.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    table.check(n)
    lo = n // 2 + 1
    b = np.arange(lo, n + 1)
    keep = (b & 1).astype(bool) & table.sqfree[lo : n + 1]
    hist = np.bincount(table.omega[lo : n + 1][keep])
    return BettiVector(n, {w - 1: int(c) for w, c in enumerate(hist)}, Method.SHIFTED_COUNT)


def f_vector_delta(n: int, counters: WeightCounters) -> FVector:
    f = {}
    for w in range(counters.max_weight + 1):
        c = counters.sigma_k(w, n)
        if c:
            f[w - 1] = c
    return FVector(n, f)


@dataclass(frozen=True)
class EulerReport:
    n: int
    expected: int
    betti_side: int
    face_side: int

    @property
    def ok(self) -> bool:
        return self.expected == self.betti_side == self.face_side


def euler_check_delta(n: int, tables: NumberTables) -> EulerReport:
    """``M(n)`` against the alternating Betti sum and minus the reduced Euler characteristic."""
    fv = f_vector_delta(n, tables.counters)
    reduced_chi = sum((-1) ** (j % 2) * c for j, c in fv.f.items())
    return EulerReport(
        n,
        mertens(n, tables.summatory),
        betti_delta(n, tables.counters).euler_sum(),
        -reduced_chi,
    )


def betti_delta_tilde(n: int, counters: WeightCounters, table: SieveTable) -> BettiVector:
    """Betti numbers of ``DeltaTilde_n`` via the wedge splitting over squares ``r^2 <= n``.

    ``beta_k = sum_r beta_{k - 2 Omega(r)}(Delta_{n // r^2})``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    vals: dict[int, int] = {}
    for r in range(1, math.isqrt(n) + 1):
        shift = 2 * int(table.omega[r])
        for k, v in betti_delta(n // (r * r), counters).values.items():
            vals[k + shift] = vals.get(k + shift, 0) + v
    return BettiVector(n, vals, Method.WEDGE_SPLIT)


@dataclass(frozen=True)
class CellEulerReport:
    n: int
    minus_liouville: int
    from_cells: int
    from_betti: int

    @property
    def ok(self) -> bool:
        return self.minus_liouville == self.from_cells == self.from_betti


def cell_dimension_counts(n: int, table: SieveTable) -> dict[int, int]:
    """Number of cells of ``DeltaTilde_n`` in each dimension ``Omega(k) - 1``."""
    table.check(n)
    if n < 1:
        return {}
    hist = np.bincount(table.omega[1 : n + 1])
    return {w - 1: int(c) for w, c in enumerate(hist) if c}


def euler_check_delta_tilde(n: int, tables: NumberTables) -> CellEulerReport:
    cells = cell_dimension_counts(n, tables.table)
    from_cells = sum((-1) ** (d % 2) * c for d, c in cells.items())
    bv = betti_delta_tilde(n, tables.counters, tables.table)
    from_betti = -bv.euler_sum()
    return CellEulerReport(n, -liouville_summatory(n, tables.summatory), from_cells, from_betti)


def parity_sums(v: BettiVector) -> tuple[int, int]:
    """``(sum of beta_k for even k >= 0, sum for odd k >= 0)``."""
    even = sum(b for k, b in v.values.items() if k >= 0 and k % 2 == 0)
    odd = sum(b for k, b in v.values.items() if k >= 0 and k % 2 == 1)
    return even, odd


# Whole-range sweeps.  Row ``k + 1`` of each array holds ``beta_k`` for every n.


def betti_delta_table(counters: WeightCounters, n_max: int | None = None) -> np.ndarray:
    n_max = counters.limit if n_max is None else n_max
    n = np.arange(n_max + 1)
    rows = [
        counters.prefix(w, "odd")[: n_max + 1].astype(np.int64) - counters.prefix(w, "odd")[n // 2]
        for w in range(counters.max_weight + 1)
    ]
    out = np.array(rows, dtype=np.int64)
    out[:, 0] = 0
    return out


def betti_delta_tilde_table(betti: np.ndarray, table: SieveTable) -> np.ndarray:
    """``DeltaTilde`` Betti rows for every n, from a :func:`betti_delta_table` result.

    Squares are grouped by ``Omega(r)`` so each group is one square-dilation
    sum per Betti row.
    """
    n_max = betti.shape[1] - 1
    root = math.isqrt(n_max)
    omega_r = table.omega[: root + 1].astype(np.int64)
    max_shift = 2 * int(omega_r[1:].max()) if root >= 1 else 0
    out = np.zeros((betti.shape[0] + max_shift, n_max + 1), dtype=np.int64)
    for w in np.unique(omega_r[1:]):
        w = int(w)
        coeffs = np.zeros(root + 1, dtype=np.int64)
        coeffs[1:] = omega_r[1:] == w
        for row in range(betti.shape[0]):
            if betti[row].any():
                out[row + 2 * w] += square_dilation_sum(betti[row], coeffs)
    return out


def alternating_rows(rows: np.ndarray) -> np.ndarray:
    """``sum_k (-1)^(k-1) beta_k`` per column, with row ``i`` holding ``k = i - 1``."""
    signs = np.array([1 if i % 2 == 0 else -1 for i in range(rows.shape[0])], dtype=np.int64)
    return signs @ rows


def prime_pi_table(table: SieveTable, n_max: int | None = None) -> np.ndarray:
    n_max = table.limit if n_max is None else n_max
    k = np.arange(n_max + 1)
    is_p = (table.lpf[: n_max + 1] == k) & (k >= 2)
    return np.cumsum(is_p, dtype=np.int64)


__all__ = [
    "Method",
    "IdentityError",
    "BettiVector",
    "FVector",
    "EulerReport",
    "CellEulerReport",
    "betti_delta",
    "betti_delta_shifted_count",
    "f_vector_delta",
    "euler_check_delta",
    "betti_delta_tilde",
    "euler_check_delta_tilde",
    "cell_dimension_counts",
    "parity_sums",
    "betti_delta_table",
    "betti_delta_tilde_table",
    "alternating_rows",
    "prime_pi_table",
]
