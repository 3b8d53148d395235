"""N-fold and M-fold matrices and the brick (table) view of their kernel vectors.

Bricks are numbered from 1 in prose (brick ``M`` is the last one) but every
Python index here is 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DimensionError, InvalidSpec
from .exact import IntMatrix, IntVector


@dataclass(frozen=True)
class NFoldSpec:
    A: IntMatrix
    B: IntMatrix
    copies: int

    def __post_init__(self):
        if self.A.cols != self.B.cols:
            raise InvalidSpec(f"A has {self.A.cols} columns but B has {self.B.cols}")
        if self.copies < 1:
            raise InvalidSpec(f"need at least one copy, got {self.copies}")


def assemble_nfold(spec: NFoldSpec) -> IntMatrix:
    """Block matrix with N copies of B on top and N copies of A on the diagonal."""
    A, B, N = spec.A, spec.B, spec.copies
    c = A.cols
    rows = []
    for i in range(B.rows):
        rows.append(list(B.row(i)) * N)
    for block in range(N):
        for i in range(A.rows):
            row = [0] * (N * c)
            row[block * c:(block + 1) * c] = A.row(i)
            rows.append(row)
    return IntMatrix.from_rows(rows, cols=N * c)


def assemble_mfold(A: IntMatrix, M: int) -> IntMatrix:
    if M < 1:
        raise InvalidSpec(f"M must be at least 1, got {M}")
    return assemble_nfold(NFoldSpec(A, IntMatrix.identity(A.cols), M))


@dataclass(frozen=True)
class BrickVector:
    """A vector of ``Z^(copies * brick_len)`` viewed as a ``copies x brick_len`` table."""

    copies: int
    brick_len: int
    entries: IntVector

    def __post_init__(self):
        if len(self.entries) != self.copies * self.brick_len:
            raise DimensionError(
                f"{len(self.entries)} entries do not form {self.copies} bricks of length {self.brick_len}"
            )

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]], brick_len: int | None = None) -> BrickVector:
        table = [tuple(int(x) for x in row) for row in table]
        if brick_len is None:
            if not table:
                raise DimensionError("cannot infer brick length of an empty table")
            brick_len = len(table[0])
        if any(len(row) != brick_len for row in table):
            raise DimensionError("table rows of unequal length")
        return cls(len(table), brick_len, tuple(x for row in table for x in row))

    @classmethod
    def from_flat(cls, entries: Sequence[int], brick_len: int) -> BrickVector:
        if brick_len <= 0 or len(entries) % brick_len:
            raise DimensionError(f"length {len(entries)} is not a multiple of {brick_len}")
        return cls(len(entries) // brick_len, brick_len, tuple(entries))

    @classmethod
    def zero(cls, copies: int, brick_len: int) -> BrickVector:
        return cls(copies, brick_len, (0,) * (copies * brick_len))

    def brick(self, i: int) -> IntVector:
        c = self.brick_len
        return self.entries[i * c:(i + 1) * c]

    @property
    def bricks(self) -> tuple[IntVector, ...]:
        return tuple(self.brick(i) for i in range(self.copies))

    def table(self) -> list[list[int]]:
        return [list(b) for b in self.bricks]

    def _check_same_shape(self, other: BrickVector):
        if (self.copies, self.brick_len) != (other.copies, other.brick_len):
            raise DimensionError(
                f"cannot combine {self.copies}x{self.brick_len} with {other.copies}x{other.brick_len}"
            )

    def __add__(self, other: BrickVector) -> BrickVector:
        self._check_same_shape(other)
        return BrickVector(self.copies, self.brick_len, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: BrickVector) -> BrickVector:
        self._check_same_shape(other)
        return BrickVector(self.copies, self.brick_len, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> BrickVector:
        return BrickVector(self.copies, self.brick_len, tuple(-a for a in self.entries))

    def __mul__(self, k: int) -> BrickVector:
        return BrickVector(self.copies, self.brick_len, tuple(k * a for a in self.entries))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __str__(self):
        return "\n".join(" ".join(f"{x:>2}" for x in b) for b in self.bricks)


def from_bricks(bricks: Sequence[Sequence[int]], brick_len: int) -> BrickVector:
    return BrickVector.from_table(bricks, brick_len=brick_len)


def type_of(x: BrickVector) -> int:
    """Number of nonzero bricks."""
    return sum(1 for b in x.bricks if any(b))


def append_zero_brick(x: BrickVector) -> BrickVector:
    return BrickVector(x.copies + 1, x.brick_len, x.entries + (0,) * x.brick_len)


def move_last_brick(x: BrickVector) -> BrickVector:
    """Move brick M to the new brick M+1 and leave brick M zero."""
    if x.copies < 1:
        raise DimensionError("no brick to move")
    c = x.brick_len
    head = x.entries[:(x.copies - 1) * c]
    return BrickVector(x.copies + 1, c, head + (0,) * c + x.entries[(x.copies - 1) * c:])


def merge_last_two_bricks(x: BrickVector) -> BrickVector:
    if x.copies < 2:
        raise DimensionError("need at least two bricks to merge")
    bricks = list(x.bricks)
    last = bricks.pop()
    bricks[-1] = tuple(a + b for a, b in zip(bricks[-1], last))
    return from_bricks(bricks, x.brick_len)


def permute_bricks(x: BrickVector, perm: Sequence[int]) -> BrickVector:
    """New vector whose brick ``i`` is brick ``perm[i]`` of ``x``."""
    if sorted(perm) != list(range(x.copies)):
        raise DimensionError(f"{list(perm)} is not a permutation of {x.copies} bricks")
    return from_bricks([x.brick(p) for p in perm], x.brick_len)


def in_kernel(m: IntMatrix, x: BrickVector | Sequence[int]) -> bool:
    entries = x.entries if isinstance(x, BrickVector) else tuple(x)
    return not any(m.apply(entries))
