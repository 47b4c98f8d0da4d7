"""Exact Smith normal form invariants of sparse integer matrices.

Unit pivots are eliminated first on a sparse dict-of-dicts representation
with a Markowitz-style choice (shortest column, then shortest row), which
handles simplicial boundary matrices almost entirely.  Whatever survives is
diagonalised densely with Python integers, so there is no overflow.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Iterable, Mapping


@dataclass(frozen=True)
class SmithResult:
    rank: int
    invariant_factors: tuple[int, ...]  # nonzero diagonal, each divides the next

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d > 1)


def _normalize_diagonal(diag: Iterable[int]) -> tuple[int, ...]:
    d = sorted(abs(x) for x in diag if x)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = math.gcd(d[i], d[j])
            if g != d[i]:
                d[i], d[j] = g, d[i] * d[j] // g
    return tuple(d)


def _dense_diagonal(a: list[list[int]]) -> list[int]:
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < m and t < n:
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    ri, rt = a[i], a[t]
                    for j in range(t, n):
                        ri[j] -= q * rt[j]
                    if ri[t]:
                        clean = False
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    for row in a[t:]:
                        row[j] -= q * row[t]
                    if a[t][j]:
                        clean = False
            if clean:
                break
            # a remainder smaller than the pivot survived; move it into place
            best = None
            for i in range(t + 1, m):
                if a[i][t] and (best is None or abs(a[i][t]) < abs(best[2])):
                    best = (i, None, a[i][t])
            for j in range(t + 1, n):
                if a[t][j] and (best is None or abs(a[t][j]) < abs(best[2])):
                    best = (None, j, a[t][j])
            if best[0] is not None:
                a[t], a[best[0]] = a[best[0]], a[t]
            else:
                for row in a:
                    row[t], row[best[1]] = row[best[1]], row[t]
        diag.append(a[t][t])
        t += 1
    return diag


def smith_normal_form(columns: Iterable[Mapping[int, int]]) -> SmithResult:
    """Rank and invariant factors of the matrix given column by column.

    Each column maps row index to a nonzero integer entry.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for c, col in enumerate(columns):
        live = {r: int(v) for r, v in col.items() if v}
        if not live:
            continue
        cols[c] = set(live)
        for r, v in live.items():
            rows.setdefault(r, {})[c] = v

    diag: list[int] = []
    heap = [(len(rs), c) for c, rs in cols.items()]
    heapq.heapify(heap)
    deferred: set[int] = set()
    while True:
        while heap:
            cnt, c = heapq.heappop(heap)
            rs = cols.get(c)
            if rs is None:
                continue
            if not rs:
                del cols[c]
                continue
            if len(rs) != cnt:
                heapq.heappush(heap, (len(rs), c))
                continue
            piv = None
            for r in rs:
                if abs(rows[r][c]) == 1 and (piv is None or len(rows[r]) < len(rows[piv])):
                    piv = r
            if piv is None:
                deferred.add(c)
                continue
            deferred.discard(c)
            prow = rows.pop(piv)
            u = prow[c]
            for r in list(rs):
                if r == piv:
                    continue
                row = rows[r]
                factor = row[c] * u
                for cc, v in prow.items():
                    nv = row.get(cc, 0) - factor * v
                    if nv:
                        if cc not in row:
                            cols[cc].add(r)
                        row[cc] = nv
                    elif cc in row:
                        del row[cc]
                        cols[cc].discard(r)
            for cc in prow:
                cols[cc].discard(piv)
                if cc != c:
                    heapq.heappush(heap, (len(cols[cc]), cc))
            del cols[c]
            diag.append(1)
        retry = [c for c in deferred if c in cols and any(abs(rows[r][c]) == 1 for r in cols[c])]
        if not retry:
            break
        for c in retry:
            deferred.discard(c)
            heapq.heappush(heap, (len(cols[c]), c))

    live_cols = sorted(c for c, rs in cols.items() if rs)
    live_rows = sorted({r for c in live_cols for r in cols[c]})
    if live_cols:
        ri = {r: i for i, r in enumerate(live_rows)}
        dense = [[0] * len(live_cols) for _ in live_rows]
        for j, c in enumerate(live_cols):
            for r in cols[c]:
                dense[ri[r]][j] = rows[r][c]
        diag.extend(_dense_diagonal(dense))
    factors = _normalize_diagonal(diag)
    return SmithResult(len(factors), factors)


def dense_smith(matrix: list[list[int]]) -> SmithResult:
    """Reference path: dense diagonalisation only."""
    a = [list(map(int, row)) for row in matrix]
    factors = _normalize_diagonal(_dense_diagonal(a))
    return SmithResult(len(factors), factors)
