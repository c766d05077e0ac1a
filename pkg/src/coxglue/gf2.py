"""GF(2) linear algebra on packed int bitsets.

A matrix is stored as one Python int per row, bit j = entry in column j,
so row operations are word-parallel for free.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class DimensionMismatch(ValueError):
    pass


def _popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class Gf2Matrix:
    rows: int
    cols: int
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.bits) != self.rows:
            raise DimensionMismatch("row count mismatch")
        mask = (1 << self.cols) - 1
        if any(b & ~mask for b in self.bits):
            raise DimensionMismatch("bits outside column range")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]]) -> "Gf2Matrix":
        rws = [tuple(int(x) & 1 for x in r) for r in rows]
        ncols = len(rws[0]) if rws else 0
        return cls(len(rws), ncols, tuple(
            sum(bit << j for j, bit in enumerate(r)) for r in rws))

    @classmethod
    def from_columns(cls, cols: Iterable[Sequence[int]], nrows: int) -> "Gf2Matrix":
        cs = list(cols)
        bits = [0] * nrows
        for j, col in enumerate(cs):
            for i in range(nrows):
                if col[i] & 1:
                    bits[i] |= 1 << j
        return cls(nrows, len(cs), tuple(bits))

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "Gf2Matrix":
        return cls(rows, cols, (0,) * rows)

    def row_list(self) -> list[list[int]]:
        return [[(b >> j) & 1 for j in range(self.cols)] for b in self.bits]

    def entry(self, i: int, j: int) -> int:
        return (self.bits[i] >> j) & 1

    def column(self, j: int) -> int:
        """Column j packed as an int (bit i = row i)."""
        out = 0
        for i, b in enumerate(self.bits):
            out |= ((b >> j) & 1) << i
        return out

    def submatrix_columns(self, columns: Sequence[int]) -> "Gf2Matrix":
        bits = []
        for b in self.bits:
            bits.append(sum(((b >> c) & 1) << j for j, c in enumerate(columns)))
        return Gf2Matrix(self.rows, len(columns), tuple(bits))

    def transpose(self) -> "Gf2Matrix":
        return Gf2Matrix(self.cols, self.rows,
                         tuple(self.column(j) for j in range(self.cols)))

    def __add__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch")
        return Gf2Matrix(self.rows, self.cols,
                         tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    def __matmul__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch("inner dimension mismatch")
        out = []
        for b in self.bits:
            acc = 0
            bb = b
            while bb:
                k = (bb & -bb).bit_length() - 1
                acc ^= other.bits[k]
                bb &= bb - 1
            out.append(acc)
        return Gf2Matrix(self.rows, other.cols, tuple(out))

    def power(self, k: int) -> "Gf2Matrix":
        if self.rows != self.cols:
            raise DimensionMismatch("power of non-square matrix")
        out = Gf2Matrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def mul_vec(self, v: int) -> int:
        """Matrix times column vector (v packed with bit j = coordinate j)."""
        out = 0
        for i, b in enumerate(self.bits):
            out |= (_popcount(b & v) & 1) << i
        return out

    def rank(self) -> int:
        return _row_rank(list(self.bits))


def _row_rank(work: list[int]) -> int:
    rank = 0
    pivots: list[int] = []
    for row in work:
        for p in pivots:
            low = p & -p
            if row & low:
                row ^= p
        if row:
            pivots.append(row)
            rank += 1
    return rank


@dataclass(frozen=True)
class Gf2Solution:
    """Result of solving M x = t over GF(2)."""

    solution: int | None
    rank: int
    augmented_rank: int

    @property
    def consistent(self) -> bool:
        return self.solution is not None

    def solution_support(self) -> tuple[int, ...]:
        if self.solution is None:
            raise ValueError("system is inconsistent")
        return tuple(j for j in range(self.solution.bit_length())
                     if (self.solution >> j) & 1)


def gf2_solve(m: Gf2Matrix, target: int) -> Gf2Solution:
    """Solve M x = t; t is packed with bit i = row i.

    Returns one solution when consistent; otherwise certifies "no solution"
    by the rank jump rank([M | t]) > rank(M).
    """
    if target >> m.rows:
        raise DimensionMismatch("target longer than row count")
    # eliminate on columns: work on the transpose, tracking combinations
    cols = [(m.column(j), 1 << j) for j in range(m.cols)]
    basis: list[tuple[int, int]] = []
    for val, combo in cols:
        for bval, bcombo in basis:
            low = bval & -bval
            if val & low:
                val ^= bval
                combo ^= bcombo
        if val:
            basis.append((val, combo))
    rank = len(basis)
    t = target
    x = 0
    for bval, bcombo in basis:
        low = bval & -bval
        if t & low:
            t ^= bval
            x ^= bcombo
    if t:
        return Gf2Solution(None, rank, rank + 1)
    return Gf2Solution(x, rank, rank)


def columns_independent(m: Gf2Matrix, columns: Sequence[int]) -> bool:
    """True iff the chosen columns of M are linearly independent."""
    return _row_rank([m.column(j) for j in columns]) == len(columns)
