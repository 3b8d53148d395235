"""Exact integer and rational linear algebra.

Everything here works on Python ints, so no overflow and no floating point.
Vectors are plain tuples of ints (``IntVector``); matrices are immutable
:class:`IntMatrix` values stored row-major.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionError

IntVector = tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix with ``rows * cols`` entries in row-major order."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionError(f"negative shape {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )
        for e in self.entries:
            if not isinstance(e, int) or isinstance(e, bool):
                raise TypeError(f"matrix entries must be int, got {type(e).__name__}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionError("ragged rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int | None = None) -> IntMatrix:
        columns = [tuple(c) for c in columns]
        if rows is None:
            rows = len(columns[0]) if columns else 0
        for c in columns:
            if len(c) != rows:
                raise DimensionError("columns of unequal length")
        return cls(rows, len(columns), tuple(columns[j][i] for i in range(rows) for j in range(len(columns))))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> IntVector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> IntVector:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> IntMatrix:
        return IntMatrix.from_rows([self.column(j) for j in range(self.cols)], cols=self.rows)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            cols = [other.column(j) for j in range(other.cols)]
            return IntMatrix.from_rows(
                [[_dot(self.row(i), c) for c in cols] for i in range(self.rows)], cols=other.cols
            )
        return self.apply(other)

    def apply(self, v: Sequence[int]) -> IntVector:
        """Matrix-vector product ``self @ v``."""
        if len(v) != self.cols:
            raise DimensionError(f"vector of length {len(v)} for {self.cols} columns")
        return tuple(_dot(self.row(i), v) for i in range(self.rows))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __str__(self):
        return "\n".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def is_zero(v: Iterable[int]) -> bool:
    return not any(v)


def gcd_all(values: Iterable[int]) -> int:
    """gcd of the absolute values; the gcd of nothing is 0."""
    return math.gcd(*values)


def primitive_part(v: Sequence[int]) -> IntVector:
    """Divide ``v`` by the gcd of its entries (zero vector stays zero)."""
    g = gcd_all(v)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def rank(m: IntMatrix) -> int:
    """Rank over the rationals by exact Gaussian elimination."""
    work = [[Fraction(x) for x in m.row(i)] for i in range(m.rows)]
    r = 0
    for col in range(m.cols):
        pivot = next((i for i in range(r, m.rows) if work[i][col] != 0), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        p = work[r][col]
        for i in range(r + 1, m.rows):
            f = work[i][col]
            if f:
                f /= p
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        r += 1
        if r == m.rows:
            break
    return r


def rational_kernel_dimension(m: IntMatrix) -> int:
    return m.cols - rank(m)


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, p, q)`` with ``p*a + q*b == g == gcd(a, b) >= 0``."""
    p0, q0, p1, q1 = 1, 0, 0, 1
    while b:
        k, r = divmod(a, b)
        a, b = b, r
        p0, p1 = p1, p0 - k * p1
        q0, q1 = q1, q0 - k * q1
    if a < 0:
        return -a, -p0, -q0
    return a, p0, q0


def hermite_rows(rows: Sequence[Sequence[int]], width: int | None = None) -> tuple[list[list[int]], int]:
    """Row-style Hermite normal form by unimodular row operations.

    Only the first ``width`` columns (default: all) drive pivoting; trailing
    columns are carried along. Returns ``(rows, r)`` where the first ``r``
    rows are the pivot rows (positive pivots, entries above each pivot
    reduced into ``[0, pivot)``) and the remaining rows are zero on the
    leading ``width`` columns.
    """
    work = [list(r) for r in rows]
    if not work:
        return work, 0
    n = len(work[0])
    width = n if width is None else width
    r = 0
    pivots = []
    for col in range(width):
        if r == len(work):
            break
        for i in range(r + 1, len(work)):
            b = work[i][col]
            if b == 0:
                continue
            a = work[r][col]
            g, p, q = _egcd(a, b)
            ag, bg = a // g, b // g
            top, other = work[r], work[i]
            work[r] = [p * x + q * y for x, y in zip(top, other)]
            work[i] = [ag * y - bg * x for x, y in zip(top, other)]
        if work[r][col] == 0:
            continue
        if work[r][col] < 0:
            work[r] = [-x for x in work[r]]
        p = work[r][col]
        for i in range(r):
            k = work[i][col] // p
            if k:
                work[i] = [x - k * y for x, y in zip(work[i], work[r])]
        pivots.append(col)
        r += 1
    return work, r


def integer_kernel_basis(m: IntMatrix) -> list[IntVector]:
    """Lattice basis of ``ker(m) ∩ Z^n`` in canonical (Hermite) form.

    Row-reduces ``[m^T | I]``; rows whose ``m^T`` part vanishes span the
    saturated kernel lattice because the transform is unimodular. The basis
    is then put in Hermite normal form so identical inputs give identical
    output regardless of elimination details.
    """
    n = m.cols
    if n == 0:
        return []
    aug = [list(m.column(j)) + [int(i == j) for i in range(n)] for j in range(n)]
    reduced, r = hermite_rows(aug, width=m.rows)
    kernel = [row[m.rows:] for row in reduced[r:]]
    if not kernel:
        return []
    canon, k = hermite_rows(kernel)
    return [tuple(row) for row in canon[:k]]


def solve_integer_relations(vectors: Sequence[Sequence[int]]) -> list[IntVector]:
    """All integer coefficient vectors ``s`` with ``sum s_i * vectors[i] == 0``.

    Returned as a lattice basis of the relation module.
    """
    if not vectors:
        return []
    length = len(vectors[0])
    if any(len(v) != length for v in vectors):
        raise DimensionError("vectors of unequal length")
    return integer_kernel_basis(IntMatrix.from_columns(vectors, rows=length))
