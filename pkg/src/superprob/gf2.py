"""Linear algebra over the two-element field with int bitsets.

A vector of Z₂ⁿ is an ``int`` whose bit ``i`` is coordinate ``i``. A matrix
stores one int per row, with bit ``j`` of row ``i`` holding entry (i, j).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatchError, SingularMatrixError, ValidationError


def parity(x: int) -> int:
    return bin(x).count("1") & 1


def gf2_rank(vectors: Iterable[int]) -> int:
    """Rank over GF(2) by elimination on leading bits."""
    pivots: dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = v
                break
            v ^= pivots[top]
    return len(pivots)


def to_bits(v: int, n: int) -> str:
    """Bit string with character ``i`` equal to coordinate ``i``."""
    return "".join("1" if (v >> i) & 1 else "0" for i in range(n))


def from_bits(s: str) -> int:
    s = s.strip()
    if not s or set(s) - {"0", "1"}:
        raise ValidationError(f"not a 0/1 string: {s!r}")
    return sum(1 << i for i, c in enumerate(s) if c == "1")


@dataclass(frozen=True)
class GF2Matrix:
    rows: tuple[int, ...]
    n_cols: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(self.rows))
        limit = 1 << self.n_cols
        if any(r < 0 or r >= limit for r in self.rows):
            raise DimensionMismatchError(f"row wider than {self.n_cols} columns")

    @classmethod
    def identity(cls, n: int) -> GF2Matrix:
        return cls(tuple(1 << i for i in range(n)), n)

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> GF2Matrix:
        n_cols = len(entries[0]) if entries else 0
        if any(len(r) != n_cols for r in entries):
            raise DimensionMismatchError("ragged matrix")
        return cls(tuple(sum((int(x) & 1) << j for j, x in enumerate(r)) for r in entries), n_cols)

    @classmethod
    def from_columns(cls, columns: Sequence[int], n_rows: int) -> GF2Matrix:
        rows = []
        for i in range(n_rows):
            rows.append(sum(((c >> i) & 1) << j for j, c in enumerate(columns)))
        return cls(tuple(rows), len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.n_cols

    @property
    def columns(self) -> tuple[int, ...]:
        return tuple(sum(((r >> j) & 1) << i for i, r in enumerate(self.rows)) for j in range(self.n_cols))

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.n_cols)] for r in self.rows]

    def apply(self, v: int) -> int:
        if v >> self.n_cols:
            raise DimensionMismatchError(f"vector wider than {self.n_cols} columns")
        return sum(parity(r & v) << i for i, r in enumerate(self.rows))

    def __matmul__(self, other):
        if isinstance(other, GF2Matrix):
            if other.n_rows != self.n_cols:
                raise DimensionMismatchError(f"cannot multiply {self.shape} by {other.shape}")
            out = []
            for r in self.rows:
                acc = 0
                j = 0
                while r:
                    if r & 1:
                        acc ^= other.rows[j]
                    r >>= 1
                    j += 1
                out.append(acc)
            return GF2Matrix(tuple(out), other.n_cols)
        if isinstance(other, int):
            return self.apply(other)
        return NotImplemented

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def rank(self) -> int:
        return gf2_rank(self.rows)

    def inverse(self) -> GF2Matrix:
        """Gauss-Jordan inverse mod 2."""
        n = self.n_rows
        if n != self.n_cols:
            raise DimensionMismatchError("only square matrices have inverses")
        left = list(self.rows)
        right = [1 << i for i in range(n)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if (left[r] >> col) & 1), None)
            if pivot is None:
                raise SingularMatrixError("matrix is singular mod 2")
            left[col], left[pivot] = left[pivot], left[col]
            right[col], right[pivot] = right[pivot], right[col]
            for r in range(n):
                if r != col and (left[r] >> col) & 1:
                    left[r] ^= left[col]
                    right[r] ^= right[col]
        return GF2Matrix(tuple(right), n)
