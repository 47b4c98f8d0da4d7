"""Sieve-backed arithmetic tables over ``[1, N]``.

Everything downstream (Betti formulas, explicit complexes, shadow checks,
asymptotic reports) reads its arithmetic from a single :class:`SieveTable`
built here.  Arrays are indexed by the integer itself; index 0 is a dummy
slot holding zeros.
"""

from __future__ import annotations

import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

DEFAULT_BUDGET = 10**8
SEGMENT_THRESHOLD = 10**7
DEFAULT_SEGMENT_LENGTH = 2**22

CACHE_MAGIC = b"DVT1"


class SieveBudgetError(ValueError):
    """Requested sieve limit is zero or exceeds the memory budget."""


class RangeError(ValueError):
    """Query argument lies beyond the limit a table was built for."""


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def small_primes(bound: int) -> np.ndarray:
    """Primes ``p <= bound`` by a plain Eratosthenes sieve."""
    if bound < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(bound + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(bound) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    return np.flatnonzero(is_p).astype(np.int64)


@dataclass(frozen=True, eq=False)
class SieveTable:
    """Per-integer arithmetic data on ``[1, limit]``.

    Attributes:
        limit: largest integer covered.
        lpf: least prime factor (``lpf[1] == 1``, ``lpf[0] == 0``).
        omega: number of prime factors counted with multiplicity.
        mu: Moebius function.
        sqfree: squarefree flag.
    """

    limit: int
    lpf: np.ndarray
    omega: np.ndarray
    mu: np.ndarray
    sqfree: np.ndarray

    def __post_init__(self):
        for arr in (self.lpf, self.omega, self.mu, self.sqfree):
            arr.setflags(write=False)

    def check(self, n: int) -> None:
        if n > self.limit:
            raise RangeError(f"n={n} exceeds sieve limit {self.limit}")

    @property
    def liouville(self) -> np.ndarray:
        """``(-1)^Omega(k)`` with a zero at index 0."""
        lam = 1 - 2 * (self.omega & 1).astype(np.int8)
        lam[0] = 0
        return lam

    def primes(self, upto: int | None = None) -> np.ndarray:
        upto = self.limit if upto is None else upto
        self.check(upto)
        k = np.arange(upto + 1)
        return np.flatnonzero((self.lpf[: upto + 1] == k) & (k >= 2))

    @cached_property
    def prime_index(self) -> np.ndarray:
        """``prime_index[p] = i`` for the i-th prime (``p_1 = 2``), else 0."""
        k = np.arange(self.limit + 1)
        is_p = (self.lpf == k) & (k >= 2)
        idx = np.cumsum(is_p, dtype=np.int64)
        idx[~is_p] = 0
        return _readonly(idx)

    def factorize(self, k: int) -> list[tuple[int, int]]:
        """Prime factorization of ``k`` as ``[(p, e), ...]`` with ``p`` ascending."""
        if k < 1:
            raise ValueError("k must be positive")
        self.check(k)
        out: list[tuple[int, int]] = []
        while k > 1:
            p = int(self.lpf[k])
            e = 0
            while k % p == 0:
                k //= p
                e += 1
            out.append((p, e))
        return out


def _sieve_segment(lo: int, hi: int, base_primes: np.ndarray):
    """Arithmetic arrays for the half-open block ``[lo, hi)``."""
    size = hi - lo
    n = np.arange(lo, hi, dtype=np.int64)
    rem = n.copy()
    lpf = np.zeros(size, dtype=np.int64)
    omega = np.zeros(size, dtype=np.uint8)
    sqfree = np.ones(size, dtype=bool)

    for p in base_primes[::-1]:
        p = int(p)
        if p >= hi:
            continue
        start = max(p, -(-lo // p) * p)
        lpf[start - lo :: p] = p

    for p in base_primes:
        p = int(p)
        if p * p >= hi:
            break
        pe = p
        while pe < hi:
            start = max(pe, -(-lo // pe) * pe)
            if start < hi:
                sl = slice(start - lo, None, pe)
                omega[sl] += 1
                rem[sl] //= p
                if pe == p * p:
                    sqfree[sl] = False
            pe *= p

    # at most one prime factor exceeds sqrt(hi)
    big = rem > 1
    omega[big] += 1
    prime = (lpf == 0) & (n >= 2)
    lpf[prime] = n[prime]

    if lo == 0:
        omega[0] = 0
        sqfree[0] = False
        lpf[0] = 0
    if lo <= 1 < hi:
        lpf[1 - lo] = 1

    mu = np.where(sqfree, 1 - 2 * (omega & 1).astype(np.int8), 0).astype(np.int8)
    return lpf, omega, mu, sqfree


def _segments(total: int, length: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + length, total)) for lo in range(0, total, length)]


def build_sieve(
    limit: int,
    *,
    budget: int = DEFAULT_BUDGET,
    segment_length: int | None = None,
    threads: int = 1,
) -> SieveTable:
    """Sieve least prime factor, Omega, mu and squarefree flags on ``[1, limit]``.

    Above ``SEGMENT_THRESHOLD`` (or whenever ``segment_length`` is given) the
    range is processed in blocks; blocks may run on ``threads`` workers.  The
    output is identical for every segmentation and thread count.
    """
    limit = int(limit)
    if limit < 1:
        raise SieveBudgetError(f"sieve limit must be >= 1, got {limit}")
    if limit > budget:
        raise SieveBudgetError(f"sieve limit {limit} exceeds budget {budget}")

    total = limit + 1
    if segment_length is None:
        segment_length = DEFAULT_SEGMENT_LENGTH if limit > SEGMENT_THRESHOLD else total
    if segment_length < 1:
        raise ValueError("segment_length must be positive")

    base = small_primes(math.isqrt(limit))
    lpf = np.empty(total, dtype=np.int32 if limit < 2**31 else np.int64)
    omega = np.empty(total, dtype=np.uint8)
    mu = np.empty(total, dtype=np.int8)
    sqfree = np.empty(total, dtype=bool)

    def fill(bounds: tuple[int, int]) -> None:
        lo, hi = bounds
        s_lpf, s_omega, s_mu, s_sq = _sieve_segment(lo, hi, base)
        lpf[lo:hi] = s_lpf
        omega[lo:hi] = s_omega
        mu[lo:hi] = s_mu
        sqfree[lo:hi] = s_sq

    blocks = _segments(total, segment_length)
    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill, blocks))
    else:
        for b in blocks:
            fill(b)
    return SieveTable(limit, lpf, omega, mu, sqfree)


class WeightCounters:
    """Prefix counts of squarefree integers split by weight and parity.

    ``sigma_k(k, x)`` is the number of squarefree integers in ``(0, x]`` with
    exactly ``k`` prime factors; the ``_odd``/``_even`` variants restrict to
    odd/even integers.  Real arguments are floored.  Weights above
    ``max_weight`` (and negative weights) count zero.
    """

    def __init__(self, table: SieveTable, limit: int | None = None):
        limit = table.limit if limit is None else int(limit)
        table.check(limit)
        self.limit = limit
        sq = table.sqfree[: limit + 1]
        om = table.omega[: limit + 1]
        odd = (np.arange(limit + 1) & 1).astype(bool)
        weights = om[sq]
        self.max_weight = int(weights.max()) if weights.size else 0
        dtype = np.int64 if limit >= 2**31 else np.int32
        W = self.max_weight + 1
        self._all = np.empty((W, limit + 1), dtype=dtype)
        self._odd = np.empty((W, limit + 1), dtype=dtype)
        for k in range(W):
            hit = sq & (om == k)
            np.cumsum(hit, out=self._all[k])
            np.cumsum(hit & odd, out=self._odd[k])
        self._all.setflags(write=False)
        self._odd.setflags(write=False)
        self._total = _readonly(np.cumsum(sq, dtype=dtype))
        self._total_odd = _readonly(np.cumsum(sq & odd, dtype=dtype))

    def _index(self, x):
        if isinstance(x, np.ndarray):
            idx = np.floor(x).astype(np.int64) if x.dtype.kind == "f" else x.astype(np.int64)
            if idx.size and idx.max() > self.limit:
                raise RangeError(f"argument {int(idx.max())} exceeds counter limit {self.limit}")
            return np.clip(idx, 0, None)
        i = math.floor(x)
        if i > self.limit:
            raise RangeError(f"argument {i} exceeds counter limit {self.limit}")
        return max(i, 0)

    def _lookup(self, arr: np.ndarray, x):
        v = arr[self._index(x)]
        return v.astype(np.int64) if isinstance(v, np.ndarray) else int(v)

    def _zero(self, x):
        return np.zeros(np.shape(x), dtype=np.int64) if isinstance(x, np.ndarray) else 0

    def sigma(self, x):
        return self._lookup(self._total, x)

    def sigma_odd(self, x):
        return self._lookup(self._total_odd, x)

    def sigma_even(self, x):
        return self.sigma(x) - self.sigma_odd(x)

    def sigma_k(self, k: int, x):
        if not 0 <= k <= self.max_weight:
            return self._zero(x)
        return self._lookup(self._all[k], x)

    def sigma_k_odd(self, k: int, x):
        if not 0 <= k <= self.max_weight:
            return self._zero(x)
        return self._lookup(self._odd[k], x)

    def sigma_k_even(self, k: int, x):
        return self.sigma_k(k, x) - self.sigma_k_odd(k, x)

    def prefix(self, k: int, parity: str | None = None) -> np.ndarray:
        """Whole prefix array for weight ``k`` (``parity`` in None/'odd'/'even')."""
        if not 0 <= k <= self.max_weight:
            return np.zeros(self.limit + 1, dtype=np.int64)
        if parity is None:
            return self._all[k]
        if parity == "odd":
            return self._odd[k]
        if parity == "even":
            return self._all[k] - self._odd[k]
        raise ValueError(f"unknown parity {parity!r}")


def sigma_counters(table: SieveTable, limit: int | None = None) -> WeightCounters:
    return WeightCounters(table, limit)


@dataclass(frozen=True, eq=False)
class SummatoryTables:
    """Prefix sums ``M(0..N)`` of mu and ``L(0..N)`` of the Liouville function."""

    mertens: np.ndarray
    liouville: np.ndarray

    @property
    def limit(self) -> int:
        return len(self.mertens) - 1

    @classmethod
    def from_sieve(cls, table: SieveTable) -> "SummatoryTables":
        m = np.cumsum(table.mu, dtype=np.int64)
        l = np.cumsum(table.liouville, dtype=np.int64)
        return cls(_readonly(m), _readonly(l))

    def _get(self, arr: np.ndarray, n: int) -> int:
        if n < 1:
            return 0
        if n > self.limit:
            raise RangeError(f"n={n} exceeds summatory limit {self.limit}")
        return int(arr[n])

    def save(self, path: str | Path) -> None:
        """Binary cache: ``DVT1``, u64 limit, then ``(M(k), L(k))`` int64 pairs for k = 0..limit."""
        rec = np.empty((self.limit + 1, 2), dtype="<i8")
        rec[:, 0] = self.mertens
        rec[:, 1] = self.liouville
        with open(path, "wb") as fh:
            fh.write(CACHE_MAGIC + struct.pack("<Q", self.limit))
            fh.write(rec.tobytes())

    @classmethod
    def load(cls, path: str | Path) -> "SummatoryTables":
        raw = Path(path).read_bytes()
        if raw[:4] != CACHE_MAGIC:
            raise ValueError(f"{path}: bad magic {raw[:4]!r}")
        (limit,) = struct.unpack("<Q", raw[4:12])
        expected = 12 + 16 * (limit + 1)
        if len(raw) != expected:
            raise ValueError(f"{path}: expected {expected} bytes, got {len(raw)}")
        rec = np.frombuffer(raw, dtype="<i8", offset=12).reshape(limit + 1, 2)
        return cls(_readonly(rec[:, 0].astype(np.int64)), _readonly(rec[:, 1].astype(np.int64)))


def mertens(n: int, tables: SummatoryTables) -> int:
    return tables._get(tables.mertens, n)


def liouville_summatory(n: int, tables: SummatoryTables) -> int:
    return tables._get(tables.liouville, n)


def primorial_dim(n: int) -> int:
    """``dim Delta_n``: one less than the number of leading primes whose product is ``<= n``.

    Exact for arbitrarily large ``n`` (primorials are Python ints).  Returns -1
    for ``n == 1``, whose complex is ``{emptyset}``.
    """
    if n < 1:
        raise ValueError(f"primorial_dim needs n >= 1, got {n}")
    count = 0
    prod = 1
    p = 1
    while True:
        p += 1
        while any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
            p += 1
        if prod * p > n:
            return count - 1
        prod *= p
        count += 1


def mobius_inversion_pair(n: int, tables: SummatoryTables, table: SieveTable) -> tuple[int, int]:
    """Rebuild ``L(n)`` from Mertens values and ``M(n)`` from Liouville values.

    Returns ``(sum_r M(n // r^2), sum_r mu(r) L(n // r^2))`` over ``r <= isqrt(n)``.
    """
    if n < 1:
        return 0, 0
    table.check(n)
    root = math.isqrt(n)
    l_from_m = 0
    m_from_l = 0
    for r in range(1, root + 1):
        q = n // (r * r)
        l_from_m += mertens(q, tables)
        m_from_l += int(table.mu[r]) * liouville_summatory(q, tables)
    return l_from_m, m_from_l


def square_dilation_sum(values: np.ndarray, coeffs: np.ndarray | None = None) -> np.ndarray:
    """``out[n] = sum_{r^2 <= n} c(r) * values[n // r^2]`` for every ``n`` at once.

    ``values[0]`` must be 0.  Each ``r`` contributes a step function with jumps
    at multiples of ``r^2``, so the whole sweep is a scatter of first
    differences followed by one cumulative sum.
    """
    N = len(values) - 1
    diff = np.diff(np.asarray(values, dtype=np.int64), prepend=0)
    out = np.zeros(N + 1, dtype=np.int64)
    for r in range(1, math.isqrt(N) + 1 if N >= 1 else 1):
        c = 1 if coeffs is None else int(coeffs[r])
        if c == 0:
            continue
        sq = r * r
        q_max = N // sq
        out[sq * np.arange(1, q_max + 1)] += c * diff[1 : q_max + 1]
    return np.cumsum(out)


def mobius_inversion_arrays(
    tables: SummatoryTables, table: SieveTable, n_max: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Both reconstructions of :func:`mobius_inversion_pair` for every ``n <= n_max``."""
    N = min(tables.limit, table.limit) if n_max is None else n_max
    table.check(N)
    l_from_m = square_dilation_sum(tables.mertens[: N + 1])
    m_from_l = square_dilation_sum(tables.liouville[: N + 1], table.mu)
    return l_from_m, m_from_l


def segmented_summatory(
    limit: int,
    points: Iterable[int],
    *,
    segment_length: int = DEFAULT_SEGMENT_LENGTH,
    budget: int = 10**10,
) -> dict[int, tuple[int, int]]:
    """``{n: (M(n), L(n))}`` at the requested points, streaming blocks of the sieve.

    Memory is bounded by one block, so ``limit`` can exceed what a full
    :class:`SieveTable` would allow.
    """
    if limit < 1 or limit > budget:
        raise SieveBudgetError(f"streaming limit {limit} outside [1, {budget}]")
    wanted = sorted({int(p) for p in points if 1 <= p <= limit})
    bad = [p for p in points if p > limit]
    if bad:
        raise RangeError(f"points {bad[:3]} exceed streaming limit {limit}")
    base = small_primes(math.isqrt(limit))
    out: dict[int, tuple[int, int]] = {}
    m_acc = 0
    l_acc = 0
    j = 0
    for lo, hi in _segments(limit + 1, segment_length):
        if j >= len(wanted):
            break
        _, omega, mu, _ = _sieve_segment(lo, hi, base)
        lam = 1 - 2 * (omega & 1).astype(np.int64)
        if lo == 0:
            lam[0] = 0
        m_pre = m_acc + np.cumsum(mu, dtype=np.int64)
        l_pre = l_acc + np.cumsum(lam)
        while j < len(wanted) and wanted[j] < hi:
            p = wanted[j]
            out[p] = (int(m_pre[p - lo]), int(l_pre[p - lo]))
            j += 1
        m_acc = int(m_pre[-1])
        l_acc = int(l_pre[-1])
    return out


@dataclass(frozen=True, eq=False)
class NumberTables:
    """The sieve with its derived counters and summatory tables, built once."""

    table: SieveTable
    counters: WeightCounters
    summatory: SummatoryTables

    @property
    def limit(self) -> int:
        return self.table.limit


def build_tables(
    limit: int,
    counter_limit: int | None = None,
    *,
    budget: int = DEFAULT_BUDGET,
    segment_length: int | None = None,
    threads: int = 1,
) -> NumberTables:
    table = build_sieve(limit, budget=budget, segment_length=segment_length, threads=threads)
    return NumberTables(table, WeightCounters(table, counter_limit), SummatoryTables.from_sieve(table))


def direct_omega(k: int) -> int:
    """Omega by trial division; an independent check on the sieve."""
    count = 0
    d = 2
    while d * d <= k:
        while k % d == 0:
            k //= d
            count += 1
        d += 1
    return count + (1 if k > 1 else 0)


def direct_mu(k: int) -> int:
    d = 2
    sign = 1
    while d * d <= k:
        if k % d == 0:
            k //= d
            if k % d == 0:
                return 0
            sign = -sign
        d += 1
    return -sign if k > 1 else sign


__all__: Sequence[str] = (
    "SieveTable",
    "WeightCounters",
    "SummatoryTables",
    "NumberTables",
    "SieveBudgetError",
    "RangeError",
    "build_sieve",
    "build_tables",
    "sigma_counters",
    "mertens",
    "liouville_summatory",
    "primorial_dim",
    "mobius_inversion_pair",
    "mobius_inversion_arrays",
    "square_dilation_sum",
    "segmented_summatory",
    "small_primes",
    "direct_omega",
    "direct_mu",
)
