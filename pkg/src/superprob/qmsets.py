"""Quantum mechanics over sets: Z₂ⁿ with many bases as many outcome sets.

Vectors and coordinates are int bitmasks (see :mod:`superprob.gf2`). A basis
vector is given in standard coordinates; a ket's coordinates in a basis have
bit ``i`` set when basis vector ``i`` occurs in its expansion. Every basis is
treated as an equiprobable outcome set, so a ket with ``k`` coordinates set
has amplitude 1/sqrt(k) on each.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .density import DensityMatrix, mix
from .errors import (
    CapExceededError,
    DimensionMismatchError,
    NormalizationError,
    NotABasisError,
    UnknownLabelError,
    ValidationError,
    ZeroVectorError,
)
from .gf2 import GF2Matrix, gf2_rank, to_bits
from .measurement import prob_given
from .outcomes import PROB_TOL, OutcomeSpace, equiprobable

MAX_COUNT_DIM = 16
MAX_ENUM_DIM = 4


def default_labels(n: int) -> tuple[str, ...]:
    return tuple(f"u{i + 1}" for i in range(n))


def is_basis(vectors: Sequence[int], n: int) -> bool:
    """True iff the ``n`` vectors are linearly independent in Z₂ⁿ."""
    if len(vectors) != n:
        raise DimensionMismatchError(f"a basis of Z2^{n} has {n} vectors, got {len(vectors)}")
    if any(v < 0 or v >> n for v in vectors):
        raise DimensionMismatchError(f"vector outside Z2^{n}")
    return gf2_rank(vectors) == n


@dataclass(frozen=True)
class GF2Basis:
    vectors: tuple[int, ...]
    labels: tuple[str, ...] = ()
    name: str = ""

    def __post_init__(self) -> None:
        vectors = tuple(int(v) for v in self.vectors)
        object.__setattr__(self, "vectors", vectors)
        n = len(vectors)
        labels = tuple(self.labels) or default_labels(n)
        object.__setattr__(self, "labels", labels)
        if len(labels) != n or len(set(labels)) != n:
            raise ValidationError("a basis needs one distinct label per vector")
        if n == 0 or not is_basis(vectors, n):
            raise NotABasisError(f"vectors {[to_bits(v, n) for v in vectors]} are not a basis")

    @property
    def n(self) -> int:
        return len(self.vectors)

    @cached_property
    def matrix(self) -> GF2Matrix:
        """Columns are the basis vectors in standard coordinates."""
        return GF2Matrix.from_columns(self.vectors, self.n)

    @cached_property
    def inverse(self) -> GF2Matrix:
        return self.matrix.inverse()

    @cached_property
    def space(self) -> OutcomeSpace:
        return equiprobable(self.labels)

    def subset(self, coords: int) -> tuple[str, ...]:
        """Labels of the basis vectors with a set coordinate."""
        return tuple(lab for i, lab in enumerate(self.labels) if (coords >> i) & 1)

    def coords_of(self, labels: Iterable[str]) -> int:
        coords = 0
        for lab in labels:
            if lab not in self.labels:
                raise UnknownLabelError(f"{lab!r} is not a label of this basis")
            coords |= 1 << self.labels.index(lab)
        return coords

    @classmethod
    def standard(cls, n: int, labels: Sequence[str] = (), name: str = "") -> GF2Basis:
        return cls(tuple(1 << i for i in range(n)), tuple(labels), name)

    def same_vectors(self, other: GF2Basis) -> bool:
        return sorted(self.vectors) == sorted(other.vectors)


def count_bases(n: int, ordered: bool = False) -> int:
    """Number of (ordered or unordered) bases of Z₂ⁿ by Gauss's product formula."""
    if n < 1:
        raise ValidationError("dimension must be at least 1")
    if n > MAX_COUNT_DIM:
        raise CapExceededError(f"basis counting is capped at n <= {MAX_COUNT_DIM}")
    total = 1
    for k in range(n):
        total *= 2**n - 2**k
    return total if ordered else total // math.factorial(n)


def enumerate_bases(n: int) -> list[GF2Basis]:
    """All unordered bases of Z₂ⁿ, vectors ascending, list sorted lexicographically.

    Basis ``k`` gets labels ``b{k}.1 .. b{k}.n``.
    """
    if n < 1:
        raise ValidationError("dimension must be at least 1")
    if n > MAX_ENUM_DIM:
        raise CapExceededError(f"basis enumeration is capped at n <= {MAX_ENUM_DIM}")
    found = [vs for vs in combinations(range(1, 2**n), n) if gf2_rank(vs) == n]
    return [
        GF2Basis(vs, tuple(f"b{k}.{i + 1}" for i in range(n)), f"b{k}")
        for k, vs in enumerate(found)
    ]


def conversion_matrix(src: GF2Basis, dst: GF2Basis) -> GF2Matrix:
    """C with coords_dst = C · coords_src (mod 2)."""
    if src.n != dst.n:
        raise DimensionMismatchError(f"bases of Z2^{src.n} and Z2^{dst.n}")
    return dst.inverse @ src.matrix


def convert_ket(coords: int, C: GF2Matrix) -> int:
    return C @ coords


@dataclass(frozen=True)
class Ket:
    """A nonzero abstract vector of Z₂ⁿ, stored in standard coordinates."""

    n: int
    vector: int

    def __post_init__(self) -> None:
        if self.vector == 0:
            raise ZeroVectorError("kets are nonzero vectors")
        if self.vector < 0 or self.vector >> self.n:
            raise DimensionMismatchError(f"vector outside Z2^{self.n}")

    @classmethod
    def from_coords(cls, basis: GF2Basis, coords: int) -> Ket:
        return cls(basis.n, basis.matrix @ coords)

    @classmethod
    def from_labels(cls, basis: GF2Basis, labels: Iterable[str]) -> Ket:
        return cls.from_coords(basis, basis.coords_of(labels))

    def coords(self, basis: GF2Basis) -> int:
        if basis.n != self.n:
            raise DimensionMismatchError(f"ket in Z2^{self.n}, basis of Z2^{basis.n}")
        return basis.inverse @ self.vector


@dataclass(frozen=True)
class KetTable:
    """Every nonzero vector of Z₂ⁿ written in each of several bases.

    ``rows[r][b]`` holds the coordinates of row ``r`` in ``bases[b]``.
    """

    bases: tuple[GF2Basis, ...]
    rows: tuple[tuple[int, ...], ...]

    def cells(self) -> list[list[tuple[str, ...]]]:
        return [[b.subset(c) for b, c in zip(self.bases, row)] for row in self.rows]

    def headers(self) -> list[str]:
        return [f"{b.name}-basis" if b.name else "basis" for b in self.bases]

    def as_data(self) -> dict:
        return {
            "bases": [{"name": b.name, "labels": list(b.labels)} for b in self.bases],
            "rows": [[list(cell) for cell in row] for row in self.cells()],
        }

    def render(self) -> str:
        table = [self.headers()] + [["{" + ",".join(cell) + "}" for cell in row] for row in self.cells()]
        widths = [max(len(r[j]) for r in table) for j in range(len(self.bases))]
        lines = [" | ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in table]
        lines.insert(1, "-+-".join("-" * w for w in widths))
        return "\n".join(lines)


def ket_table(bases: Sequence[GF2Basis]) -> KetTable:
    """One row per nonzero vector, one column per basis.

    Rows are ordered by their coordinates in the first basis, read as a binary
    numeral with the first label most significant, largest first. For the
    three coin bases this gives the {H,T}, {H}, {T} order.
    """
    if not bases:
        raise ValidationError("need at least one basis")
    n = bases[0].n
    if any(b.n != n for b in bases):
        raise DimensionMismatchError("all bases must have the same dimension")
    if n > MAX_ENUM_DIM:
        raise CapExceededError(f"ket tables are capped at n <= {MAX_ENUM_DIM}")
    first = bases[0]
    coords_first = sorted(range(1, 2**n), key=lambda c: to_bits(c, n), reverse=True)
    rows = []
    for c in coords_first:
        ket = Ket.from_coords(first, c)
        rows.append(tuple(ket.coords(b) for b in bases))
    return KetTable(tuple(bases), tuple(rows))


def ket_to_density(coords: int, basis: GF2Basis) -> DensityMatrix:
    """Real density matrix of a 0/1 coordinate vector, normalized to unit length."""
    if coords == 0:
        raise ZeroVectorError("the zero vector has no density matrix")
    if coords < 0 or coords >> basis.n:
        raise DimensionMismatchError(f"coordinates outside Z2^{basis.n}")
    v = np.array([float((coords >> i) & 1) for i in range(basis.n)])
    v /= math.sqrt(v.sum())
    return DensityMatrix(basis.space, np.outer(v, v))


@dataclass(frozen=True)
class QState:
    """A pure ket (one component) or a classical mixture of kets."""

    components: tuple[tuple[float, Ket], ...] = field(default=())

    def __post_init__(self) -> None:
        comps = tuple((float(w), k) for w, k in self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise ValidationError("a state needs at least one component")
        if any(w < 0 or not math.isfinite(w) for w, _ in comps):
            raise NormalizationError("component weights must be non-negative")
        if abs(math.fsum(w for w, _ in comps) - 1.0) > PROB_TOL:
            raise NormalizationError("component weights must sum to 1")
        if len({k.n for _, k in comps}) != 1:
            raise DimensionMismatchError("all components must share a dimension")

    @property
    def n(self) -> int:
        return self.components[0][1].n

    @property
    def is_pure_ket(self) -> bool:
        return len(self.components) == 1

    @classmethod
    def pure(cls, ket: Ket) -> QState:
        return cls(((1.0, ket),))

    @classmethod
    def mixture(cls, parts: Iterable[tuple[float, Ket]]) -> QState:
        return cls(tuple(parts))


def state_density_in_basis(state: QState, src: GF2Basis, dst: GF2Basis) -> DensityMatrix:
    """Density matrix of ``state`` in the ``dst`` frame.

    Each component is read in ``src`` coordinates, converted with the
    ``src -> dst`` conversion matrix, turned into a density matrix, and the
    results are mixed with the component weights.
    """
    if state.n != src.n or src.n != dst.n:
        raise DimensionMismatchError("state and bases must share a dimension")
    C = conversion_matrix(src, dst)
    mats = [ket_to_density(convert_ket(ket.coords(src), C), dst) for _, ket in state.components]
    return mix([w for w, _ in state.components], mats)


def measure_in_basis(state: QState, src: GF2Basis, dst: GF2Basis, target: Iterable[str]) -> float:
    """Probability of the ``target`` labels of ``dst`` when ``state`` is measured in ``dst``."""
    target = list(target)
    if not target:
        raise ValidationError("target must name at least one basis label")
    for lab in target:
        if lab not in dst.labels:
            raise UnknownLabelError(f"{lab!r} is not a label of the target basis")
    rho = state_density_in_basis(state, src, dst)
    return prob_given(rho.space.event(target), rho)


def coin_bases() -> tuple[GF2Basis, GF2Basis, GF2Basis]:
    """The three bases of Z₂² over the coin outcomes H, T.

    U is standard; U' has H' = {H,T}, T' = {T}; U'' has H'' = {H}, T'' = {H,T}.
    """
    H, T = 0b01, 0b10
    return (
        GF2Basis((H, T), ("H", "T"), "U"),
        GF2Basis((H | T, T), ("H'", "T'"), "U'"),
        GF2Basis((H, H | T), ("H''", "T''"), "U''"),
    )


def prefix_basis(n: int, labels: Sequence[str] = (), name: str = "") -> GF2Basis:
    """Basis whose k-th vector has the first k+1 standard coordinates set."""
    return GF2Basis(tuple((1 << (k + 1)) - 1 for k in range(n)), tuple(labels), name)
