"""Explicit divisor complexes and an exact homology oracle.

Nothing here uses the closed-form Betti formulas: faces are built from the
sieve's factorizations, and homology comes from Smith normal forms of the
augmented integer boundary matrices (the empty face spans chain degree -1,
so reduced homology and ``beta_{-1}`` need no special casing).

Vertices are prime indices in increasing order, ``p_1 = 2``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .betti import BettiVector, Method, cell_dimension_counts
from .sieve import SieveTable
from .snf import smith_normal_form

DEFAULT_FACE_CAP = 10**5

Face = tuple[int, ...]
Monomial = tuple[tuple[int, int], ...]  # ((variable, exponent), ...) by variable


class ComplexTooLarge(ValueError):
    """Face or monomial count exceeds the configured cap."""


class MulticomplexError(ValueError):
    """Monomial set is malformed or not closed under divisibility."""


@dataclass(frozen=True)
class SimplicialComplexModel:
    n: int | None
    faces: tuple[Face, ...]

    def __post_init__(self):
        ordered = tuple(sorted({tuple(sorted(f)) for f in self.faces}, key=lambda f: (len(f), f)))
        object.__setattr__(self, "faces", ordered)

    @classmethod
    def from_faces(cls, faces: Iterable[Iterable[int]], *, n: int | None = None, validate: bool = True):
        c = cls(n, tuple(tuple(f) for f in faces))
        if validate and not c.is_closed():
            raise ValueError("face family is not closed under taking subsets")
        return c

    @property
    def dim(self) -> int:
        return max((len(f) for f in self.faces), default=0) - 1

    @property
    def faces_by_dim(self) -> dict[int, list[Face]]:
        out: dict[int, list[Face]] = defaultdict(list)
        for f in self.faces:
            out[len(f) - 1].append(f)
        return dict(out)

    @property
    def vertices(self) -> list[int]:
        return sorted(f[0] for f in self.faces if len(f) == 1)

    def f_vector(self) -> dict[int, int]:
        return {d: len(fs) for d, fs in self.faces_by_dim.items()}

    def is_closed(self) -> bool:
        present = set(self.faces)
        if self.faces and () not in present:
            return False
        return all(f[:i] + f[i + 1 :] in present for f in self.faces for i in range(len(f)))


def build_delta_complex(n: int, table: SieveTable, face_cap: int = DEFAULT_FACE_CAP) -> SimplicialComplexModel:
    """Faces ``P(k)`` for squarefree ``k <= n``, written as prime-index tuples."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    table.check(n)
    count = int(table.sqfree[1 : n + 1].sum())
    if count > face_cap:
        raise ComplexTooLarge(f"Delta_{n} has {count} faces, cap is {face_cap}")
    pidx = table.prime_index
    faces = []
    for k in range(1, n + 1):
        if table.sqfree[k]:
            faces.append(tuple(int(pidx[p]) for p, _ in table.factorize(k)))
    return SimplicialComplexModel(n, tuple(faces))


def verify_shifted(c: SimplicialComplexModel, *, exhaustive: bool = False) -> bool:
    """Whether swapping any vertex of a face for a smaller absent vertex stays in the complex.

    The default only tries the next smaller vertex.  That is equivalent:
    same-size sets ordered componentwise are generated by those single
    steps.  ``exhaustive=True`` tries every smaller vertex.
    """
    present = set(c.faces)
    verts = c.vertices
    rank = {v: i for i, v in enumerate(verts)}
    for f in c.faces:
        members = set(f)
        for pos, j in enumerate(f):
            if j not in rank:
                return False
            below = verts[: rank[j]] if exhaustive else verts[max(rank[j] - 1, 0) : rank[j]]
            rest = f[:pos] + f[pos + 1 :]
            for i in below:
                if i in members:
                    continue
                if tuple(sorted(rest + (i,))) not in present:
                    return False
    return True


@dataclass(frozen=True)
class BoundaryMatrixSet:
    """``matrices[j]`` maps j-faces to (j-1)-faces, one column per j-face.

    Columns are ``{row_index: +-1}`` with rows indexing ``bases[j - 1]``;
    ``bases[-1] == [()]`` is the empty face.
    """

    bases: Mapping[int, Sequence[Face]]
    matrices: Mapping[int, Sequence[Mapping[int, int]]]

    def composition_is_zero(self) -> bool:
        for j in self.matrices:
            if j - 1 not in self.matrices:
                continue
            lower = self.matrices[j - 1]
            for col in self.matrices[j]:
                acc: dict[int, int] = defaultdict(int)
                for mid, a in col.items():
                    for r, b in lower[mid].items():
                        acc[r] += a * b
                if any(acc.values()):
                    return False
        return True


def boundary_matrices(c: SimplicialComplexModel) -> BoundaryMatrixSet:
    bases = c.faces_by_dim
    index = {d: {f: i for i, f in enumerate(fs)} for d, fs in bases.items()}
    mats: dict[int, list[dict[int, int]]] = {}
    for d, fs in bases.items():
        if d < 0:
            continue
        below = index[d - 1]
        mats[d] = [
            {below[f[:i] + f[i + 1 :]]: (-1) ** i for i in range(len(f))}
            for f in fs
        ]
    return BoundaryMatrixSet(bases, mats)


@dataclass(frozen=True)
class HomologyResult:
    betti: BettiVector
    torsion: Mapping[int, tuple[int, ...]] = field(default_factory=dict)
    ranks: Mapping[int, int] = field(default_factory=dict)

    @property
    def torsion_free(self) -> bool:
        return not any(self.torsion.values())


def homology_betti(c: SimplicialComplexModel, face_cap: int = DEFAULT_FACE_CAP) -> HomologyResult:
    """Reduced integral homology of ``c``: Betti numbers and torsion coefficients per degree."""
    if len(c.faces) > face_cap:
        raise ComplexTooLarge(f"{len(c.faces)} faces exceed cap {face_cap}")
    if not c.faces:
        return HomologyResult(BettiVector(c.n or 0, {}, Method.HOMOLOGY_ORACLE))
    bms = boundary_matrices(c)
    snf = {d: smith_normal_form(cols) for d, cols in bms.matrices.items()}
    ranks = {d: s.rank for d, s in snf.items()}
    betti = {}
    torsion = {}
    for d, fs in bms.bases.items():
        betti[d] = len(fs) - ranks.get(d, 0) - ranks.get(d + 1, 0)
        if d + 1 in snf and snf[d + 1].torsion:
            torsion[d] = snf[d + 1].torsion
    return HomologyResult(BettiVector(c.n or 0, betti, Method.HOMOLOGY_ORACLE), torsion, ranks)


# Multicomplexes


def _canonical(pairs: Iterable[tuple[int, int]]) -> Monomial:
    acc: dict[int, int] = defaultdict(int)
    for var, exp in pairs:
        if var < 1 or exp < 0:
            raise MulticomplexError(f"bad factor x_{var}^{exp}")
        acc[var] += exp
    return tuple(sorted((v, e) for v, e in acc.items() if e))


def degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def square_split(m: Monomial) -> tuple[Monomial, Monomial]:
    """Write ``m = r^2 * s`` with ``s`` squarefree; returns ``(r, s)``."""
    r = tuple((v, e // 2) for v, e in m if e // 2)
    s = tuple((v, 1) for v, e in m if e % 2)
    return r, s


@dataclass(frozen=True)
class MulticomplexModel:
    monomials: frozenset[Monomial]

    @classmethod
    def from_pairs(cls, monomials: Iterable[Iterable[tuple[int, int]]]) -> "MulticomplexModel":
        mc = cls(frozenset(_canonical(m) for m in monomials))
        mc.validate()
        return mc

    def validate(self) -> None:
        if () not in self.monomials:
            raise MulticomplexError("multicomplex must contain the unit monomial")
        for m in self.monomials:
            for i, (v, e) in enumerate(m):
                lower = m[:i] + (((v, e - 1),) if e > 1 else ()) + m[i + 1 :]
                if lower not in self.monomials:
                    raise MulticomplexError(f"{format_monomial(m)} present but divisor {format_monomial(lower)} missing")

    def __len__(self) -> int:
        return len(self.monomials)

    def __contains__(self, m) -> bool:
        return _canonical(m) in self.monomials

    def full_squares(self) -> list[Monomial]:
        return sorted((m for m in self.monomials if all(e % 2 == 0 for _, e in m)), key=lambda m: (degree(m), m))

    def link_complex(self, square: Monomial) -> SimplicialComplexModel:
        """Supports of squarefree ``s`` with ``square * s`` in the multicomplex."""
        r_exp = dict(square)
        faces = []
        for m in self.monomials:
            ex = dict(m)
            if any(ex.get(v, 0) < e for v, e in r_exp.items()):
                continue
            rest = {v: ex[v] - r_exp.get(v, 0) for v in ex}
            if all(e <= 1 for e in rest.values()):
                faces.append(tuple(v for v, e in sorted(rest.items()) if e))
        return SimplicialComplexModel(None, tuple(faces))


def format_monomial(m: Monomial) -> str:
    return " ".join(f"{v}^{e}" for v, e in m) if m else "1"


def parse_multicomplex(text: str) -> MulticomplexModel:
    """One monomial per line as ``i^e`` factors (``i`` alone means exponent 1), ``1`` for the unit."""
    monomials = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "1":
            monomials.append(())
            continue
        pairs = []
        for tok in line.split():
            var, _, exp = tok.partition("^")
            try:
                pairs.append((int(var), int(exp) if exp else 1))
            except ValueError:
                raise MulticomplexError(f"line {lineno}: cannot parse factor {tok!r}") from None
        monomials.append(pairs)
    return MulticomplexModel.from_pairs(monomials)


def format_multicomplex(mc: MulticomplexModel) -> str:
    ordered = sorted(mc.monomials, key=lambda m: (degree(m), m))
    return "".join(format_monomial(m) + "\n" for m in ordered)


def build_divisor_multicomplex(n: int, table: SieveTable) -> MulticomplexModel:
    """Exponent vectors (in prime-index variables) of every ``1 <= k <= n``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    table.check(n)
    pidx = table.prime_index
    mons = frozenset(
        tuple((int(pidx[p]), e) for p, e in table.factorize(k)) for k in range(1, n + 1)
    )
    return MulticomplexModel(mons)


def multicomplex_betti(mc: MulticomplexModel, face_cap: int = DEFAULT_FACE_CAP, *, n: int = 0) -> BettiVector:
    """Betti numbers of the cellular realization by splitting over full squares.

    ``beta_k = sum over squares r^2 of beta_{k - 2 deg r}`` of the simplicial
    complex attached to ``r^2``; each piece goes through :func:`homology_betti`.
    """
    if len(mc) > face_cap:
        raise ComplexTooLarge(f"{len(mc)} monomials exceed cap {face_cap}")
    vals: dict[int, int] = defaultdict(int)
    for sq in mc.full_squares():
        shift = degree(sq)  # deg r^2 == 2 deg r
        piece = homology_betti(mc.link_complex(sq), face_cap).betti
        for k, v in piece.values.items():
            vals[k + shift] += v
    return BettiVector(n, vals, Method.WEDGE_SPLIT)


@dataclass(frozen=True)
class CellCensus:
    n: int
    counts: Mapping[int, int]

    @property
    def reduced_euler(self) -> int:
        return sum(c if d % 2 == 0 else -c for d, c in self.counts.items())


def cell_census(n: int, table: SieveTable) -> CellCensus:
    """Cells of ``DeltaTilde_n`` by dimension; ``k = 1`` is the single (-1)-cell."""
    return CellCensus(n, cell_dimension_counts(n, table))


def squarefree_part_check(mc: MulticomplexModel) -> bool:
    """Every monomial is recovered exactly from its ``(r, s)`` split."""
    for m in mc.monomials:
        r, s = square_split(m)
        rebuilt = _canonical([(v, 2 * e) for v, e in r] + list(s))
        if rebuilt != m:
            return False
    return True


__all__ = [
    "DEFAULT_FACE_CAP",
    "ComplexTooLarge",
    "MulticomplexError",
    "SimplicialComplexModel",
    "BoundaryMatrixSet",
    "HomologyResult",
    "MulticomplexModel",
    "CellCensus",
    "build_delta_complex",
    "verify_shifted",
    "boundary_matrices",
    "homology_betti",
    "build_divisor_multicomplex",
    "multicomplex_betti",
    "cell_census",
    "parse_multicomplex",
    "format_multicomplex",
    "format_monomial",
    "square_split",
    "squarefree_part_check",
    "degree",
]
