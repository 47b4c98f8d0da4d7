"""Cascade representations, Kruskal-Katona shadow functions, and the
inequalities they give between odd squarefree counts.

Conventions: ``C(a, 0) = 1``, ``C(a, b) = 0`` for ``a < b``, and the cascade
of 0 is empty, so both shadows of 0 are 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .betti import IdentityError, betti_delta, f_vector_delta
from .sieve import WeightCounters


@dataclass(frozen=True)
class CascadeRep:
    """``n = sum C(a_j, j)`` over ``digits = ((a_k, k), ..., (a_i, i))``."""

    n: int
    k: int
    digits: tuple[tuple[int, int], ...]

    def value(self) -> int:
        return sum(comb(a, j) for a, j in self.digits)

    def is_valid(self) -> bool:
        if self.value() != self.n:
            return False
        idx = [j for _, j in self.digits]
        if idx != list(range(self.k, self.k - len(idx), -1)):
            return False
        a = [a for a, _ in self.digits]
        return all(x > y for x, y in zip(a, a[1:])) and all(a >= j >= 1 for a, j in self.digits)


def _largest_top(n: int, j: int) -> int:
    """Largest ``a`` with ``C(a, j) <= n`` (requires ``n >= 1``)."""
    lo = j
    hi = j + 1
    while comb(hi, j) <= n:
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if comb(mid, j) <= n:
            lo = mid
        else:
            hi = mid
    return lo


@lru_cache(maxsize=1 << 16)
def cascade(n: int, k: int) -> CascadeRep:
    """Greedy k-binomial expansion of ``n``."""
    if n < 0 or k < 1:
        raise ValueError(f"cascade needs n >= 0 and k >= 1, got n={n}, k={k}")
    digits = []
    rest = n
    j = k
    while rest > 0:
        a = _largest_top(rest, j)
        digits.append((a, j))
        rest -= comb(a, j)
        j -= 1
    return CascadeRep(n, k, tuple(digits))


@lru_cache(maxsize=1 << 16)
def lower_shadow(n: int, k: int) -> int:
    """``partial_{k-1}(n)``, read off the k-cascade of ``n``."""
    return sum(comb(a, j - 1) for a, j in cascade(n, k).digits)


@lru_cache(maxsize=1 << 16)
def upper_shadow(n: int, k: int) -> int:
    """``partial^{k-1}(n)``, read off the k-cascade of ``n``."""
    return sum(comb(a - 1, j - 1) for a, j in cascade(n, k).digits)


@dataclass(frozen=True)
class InequalityRow:
    n: int
    k: int
    label: str
    lhs: int
    rhs: int

    @property
    def slack(self) -> int:
        return self.rhs - self.lhs

    @property
    def ok(self) -> bool:
        return self.slack >= 0


@dataclass(frozen=True)
class InequalityReport:
    n: int
    rows: tuple[InequalityRow, ...]
    identity_failures: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.identity_failures and all(r.ok for r in self.rows)

    def violations(self) -> list[InequalityRow]:
        return [r for r in self.rows if not r.ok]


def admissible_ks(counters: WeightCounters) -> range:
    # beyond max_weight + 1 every count on both sides is zero
    return range(1, counters.max_weight + 2)


def verify_shadow_bounds(n: int, counters: WeightCounters) -> InequalityReport:
    """Both shadow bounds on odd squarefree counts, for every admissible ``k``.

    * ``lower``: ``partial_k(s_{k+1}(n)) <= s_k(n/2)``
    * ``upper``: ``partial^k(s_{2k+2}(n) + s_{2k+1}(n)) <= s_{2k}(n/2) + s_{2k-1}(n/2)``

    where ``s_j`` counts odd squarefree integers of weight ``j``.
    """
    s = counters.sigma_k_odd
    half = n // 2
    rows = []
    for k in admissible_ks(counters):
        rows.append(InequalityRow(n, k, "lower", lower_shadow(s(k + 1, n), k + 1), s(k, half)))
        rows.append(
            InequalityRow(
                n,
                k,
                "upper",
                upper_shadow(s(2 * k + 2, n) + s(2 * k + 1, n), k + 1),
                s(2 * k, half) + s(2 * k - 1, half),
            )
        )
    return InequalityReport(n, tuple(rows))


def _shadow_of_array(values: np.ndarray, k: int, fn) -> np.ndarray:
    uniq, inv = np.unique(values, return_inverse=True)
    mapped = np.array([fn(int(v), k) for v in uniq], dtype=np.int64)
    return mapped[inv.reshape(-1)]


@dataclass(frozen=True)
class SweepSummary:
    label: str
    k: int
    checked: int
    violations: tuple[int, ...]  # offending n, first few
    min_slack: int


def shadow_bound_sweep(counters: WeightCounters, n_max: int | None = None) -> list[SweepSummary]:
    """:func:`verify_shadow_bounds` for every ``1 <= n <= n_max`` at once, one pass per ``k``."""
    n_max = counters.limit if n_max is None else n_max
    n = np.arange(1, n_max + 1)
    half = n // 2

    def odd(w: int) -> np.ndarray:
        return counters.prefix(w, "odd").astype(np.int64)

    out = []
    for k in admissible_ks(counters):
        lhs = _shadow_of_array(odd(k + 1)[1 : n_max + 1], k + 1, lower_shadow)
        rhs = odd(k)[half]
        out.append(_summarize("lower", k, n, lhs, rhs))
        lhs = _shadow_of_array(odd(2 * k + 2)[1 : n_max + 1] + odd(2 * k + 1)[1 : n_max + 1], k + 1, upper_shadow)
        rhs = odd(2 * k)[half] + odd(2 * k - 1)[half]
        out.append(_summarize("upper", k, n, lhs, rhs))
    return out


def _summarize(label: str, k: int, n: np.ndarray, lhs: np.ndarray, rhs: np.ndarray) -> SweepSummary:
    slack = rhs - lhs
    bad = n[slack < 0][:5]
    return SweepSummary(label, k, len(n), tuple(int(b) for b in bad), int(slack.min()) if len(n) else 0)


def chi_truncated_pair(n: int, k: int, counters: WeightCounters) -> tuple[int, int]:
    """``(sum_{j>=k} (-1)^(j-k) (f_j - beta_j), sigma^odd_k(n // 2))`` for ``Delta_n``."""
    if k < 0:
        raise ValueError("k must be >= 0")
    fv = f_vector_delta(n, counters)
    bv = betti_delta(n, counters)
    top = max(fv.dim, bv.top)
    alt = sum((-1) ** ((j - k) % 2) * (fv[j] - bv[j]) for j in range(k, top + 1))
    return alt, counters.sigma_k_odd(k, n // 2)


def chi_truncated(n: int, k: int, counters: WeightCounters) -> int:
    alt, closed = chi_truncated_pair(n, k, counters)
    if alt != closed:
        raise IdentityError(f"chi_{k - 1}(Delta_{n}): alternating sum {alt} != closed form {closed}")
    return alt


def verify_fbeta_relations(n: int, counters: WeightCounters) -> InequalityReport:
    """Face/Betti shadow relations on ``Delta_n`` and their reduction to odd counts.

    * ``fb-lower``: ``partial_k(chi_k + beta_k) <= chi_{k-1}``
    * ``fb-upper``: ``partial^k(f_{2k+1} + beta_{2k}) <= f_{2k-1} - beta_{2k-1}``

    ``chi_{k-1}`` is the truncated alternating sum of ``f_j - beta_j``.
    """
    fv = f_vector_delta(n, counters)
    bv = betti_delta(n, counters)
    s = counters.sigma_k_odd
    half = n // 2
    top = max(fv.dim, bv.top, 0)

    def chi(m: int) -> int:  # chi_{m}, truncated from j = m + 1
        return sum((-1) ** ((j - m - 1) % 2) * (fv[j] - bv[j]) for j in range(m + 1, top + 1))

    rows = []
    failures = []
    for k in admissible_ks(counters):
        low_arg = chi(k) + bv[k]
        up_arg = fv[2 * k + 1] + bv[2 * k]
        up_rhs = fv[2 * k - 1] - bv[2 * k - 1]
        rows.append(InequalityRow(n, k, "fb-lower", lower_shadow(low_arg, k + 1), chi(k - 1)))
        rows.append(InequalityRow(n, k, "fb-upper", upper_shadow(up_arg, k + 1), up_rhs))
        checks = {
            "chi_k + beta_k": (low_arg, s(k + 1, n)),
            "chi_{k-1}": (chi(k - 1), s(k, half)),
            "f_{2k+1} + beta_{2k}": (up_arg, s(2 * k + 2, n) + s(2 * k + 1, n)),
            "f_{2k-1} - beta_{2k-1}": (up_rhs, s(2 * k - 1, half) + s(2 * k, half)),
        }
        for name, (lhs, rhs) in checks.items():
            if lhs != rhs:
                failures.append(f"n={n} k={k}: {name} = {lhs}, odd-count form = {rhs}")
    return InequalityReport(n, tuple(rows), tuple(failures))


__all__ = [
    "CascadeRep",
    "InequalityRow",
    "InequalityReport",
    "cascade",
    "lower_shadow",
    "upper_shadow",
    "verify_shadow_bounds",
    "chi_truncated",
    "chi_truncated_pair",
    "verify_fbeta_relations",
    "admissible_ks",
    "shadow_bound_sweep",
    "SweepSummary",
]
