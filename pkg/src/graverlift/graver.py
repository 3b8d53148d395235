"""Graver bases, the conformal order, circuits and Graver complexity.

The Graver basis is computed by a completion procedure: start from a
symmetric generating set of the kernel lattice, add pairwise sums, reduce
each sum by conformal subtraction and keep whatever irreducible remainder
is left. The surviving set contains every conformally minimal kernel
vector; a final interreduction removes the rest.

Hot loops run on numpy int64 arrays. If any entry grows past
``_INT64_SAFE`` the arrays switch to object dtype, so results stay exact.
"""

from __future__ import annotations

import heapq
import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded, DimensionError
from .exact import IntMatrix, IntVector, integer_kernel_basis, primitive_part, rank

log = logging.getLogger(__name__)

DEFAULT_COMPLETION_BUDGET = 10**6
DEFAULT_ORACLE_BUDGET = 10**7
DEFAULT_CIRCUIT_COLUMNS = 40

_INT64_SAFE = 2**40


def norm1(v: Iterable[int]) -> int:
    return sum(abs(x) for x in v)


def conforms(u: Sequence[int], v: Sequence[int]) -> bool:
    """``u ⊑ v``: same sign pattern where ``u`` is nonzero and ``|u_j| <= |v_j|``."""
    if len(u) != len(v):
        raise DimensionError(f"lengths {len(u)} and {len(v)} differ")
    return all(a * b >= 0 and abs(a) <= abs(b) for a, b in zip(u, v))


def sign_compatible(u: Sequence[int], v: Sequence[int]) -> bool:
    return all(a * b >= 0 for a, b in zip(u, v))


def canonical_sign(v: Sequence[int]) -> IntVector:
    """Representative of ``±v`` whose first nonzero entry is positive."""
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


@dataclass(frozen=True)
class GraverBasis:
    ambient_matrix: IntMatrix
    elements: tuple[IntVector, ...]

    def __len__(self):
        return len(self.elements)

    def __iter__(self) -> Iterator[IntVector]:
        return iter(self.elements)

    def __contains__(self, v) -> bool:
        return tuple(v) in self._lookup

    @cached_property
    def _lookup(self) -> frozenset:
        return frozenset(self.elements)

    def representatives(self) -> list[IntVector]:
        """One element per ``±`` pair (first nonzero entry positive), in canonical order."""
        return [v for v in self.elements if canonical_sign(v) == v]

    def max_norm(self) -> int:
        return max((norm1(v) for v in self.elements), default=0)


@dataclass(frozen=True)
class CircuitSet:
    ambient_matrix: IntMatrix
    elements: tuple[IntVector, ...]

    def __len__(self):
        return len(self.elements)

    def __iter__(self) -> Iterator[IntVector]:
        return iter(self.elements)

    def max_support(self) -> int:
        return max((sum(1 for x in v if x) for v in self.elements), default=0)


def _split(v: np.ndarray) -> np.ndarray:
    """``(v+, v-)`` so that conformal order becomes the componentwise order."""
    return np.concatenate([np.maximum(v, 0), np.maximum(-v, 0)], axis=-1)


def _mask(v: Sequence[int]) -> int:
    bits = 0
    n = len(v)
    for j, a in enumerate(v):
        if a > 0:
            bits |= 1 << j
        elif a < 0:
            bits |= 1 << (n + j)
    return bits


class _ReductionSet:
    """Growing set of vectors supporting fast "is anything ⊑ s" queries."""

    def __init__(self, n: int, capacity: int = 256):
        self.n = n
        self.dtype = np.int64
        self.size = 0
        self.vecs = np.zeros((capacity, n), dtype=self.dtype)
        self.split = np.zeros((capacity, 2 * n), dtype=self.dtype)
        # sign-support bitmasks; g ⊑ s needs mask(g) ⊆ mask(s)
        self.use_masks = 2 * n <= 63
        self.masks = np.zeros(capacity, dtype=np.int64)
        self.members: set[IntVector] = set()

    def _grow(self):
        cap = max(2 * self.vecs.shape[0], 16)
        for name in ("vecs", "split", "masks"):
            old = getattr(self, name)
            new = np.zeros((cap,) + old.shape[1:], dtype=old.dtype)
            new[: self.size] = old[: self.size]
            setattr(self, name, new)

    def _promote(self):
        log.debug("switching reduction set to arbitrary precision")
        self.dtype = object
        self.vecs = self.vecs.astype(object)
        self.split = self.split.astype(object)

    def add(self, v: IntVector):
        if self.dtype is not object and max(abs(x) for x in v) >= _INT64_SAFE:
            self._promote()
        if self.size == self.vecs.shape[0]:
            self._grow()
        arr = np.array(v, dtype=self.dtype)
        self.vecs[self.size] = arr
        self.split[self.size] = _split(arr)
        if self.use_masks:
            self.masks[self.size] = _mask(v)
        self.size += 1
        self.members.add(v)

    def reducer(self, s: IntVector) -> int:
        """Index of some stored ``g ⊑ s`` or -1."""
        if self.size == 0:
            return -1
        s_split = _split(np.array(s, dtype=self.dtype))
        if self.use_masks:
            cand = np.flatnonzero((self.masks[: self.size] & ~_mask(s)) == 0)
            if not cand.size:
                return -1
            ok = np.all(self.split[cand] <= s_split, axis=1)
            hits = cand[ok]
        else:
            hits = np.flatnonzero(np.all(self.split[: self.size] <= s_split, axis=1))
        return int(hits[0]) if hits.size else -1

    def normal_form(self, s: IntVector) -> IntVector:
        if self.dtype is not object and max(abs(x) for x in s) >= _INT64_SAFE:
            self._promote()
        while any(s):
            i = self.reducer(s)
            if i < 0:
                break
            s = tuple(int(a - b) for a, b in zip(s, self.vecs[i]))
        return s

    def partners(self, v: IntVector) -> np.ndarray:
        """Sums ``v + g`` over stored ``g`` that are not sign-compatible with ``v``."""
        if self.size == 0:
            return np.zeros((0, self.n), dtype=self.dtype)
        arr = np.array(v, dtype=self.dtype)
        stored = self.vecs[: self.size]
        clash = np.any(stored * arr < 0, axis=1)
        return stored[clash] + arr


def graver_basis(m: IntMatrix, budget: int = DEFAULT_COMPLETION_BUDGET,
                 max_entry: int | None = None) -> GraverBasis:
    """All conformally minimal nonzero vectors of ``ker(m) ∩ Z^n``.

    Args:
        m: the matrix.
        budget: cap on the number of vectors held by the completion
            (reduction set plus pending candidates).
        max_entry: optional cap on the absolute value of any entry seen.

    Raises:
        BudgetExceeded: a cap was hit; no partial result is returned.
    """
    n = m.cols
    seed = integer_kernel_basis(m)
    if not seed:
        return GraverBasis(m, ())

    store = _ReductionSet(n)
    heap: list[tuple[int, IntVector]] = []
    queued: set[IntVector] = set()

    def push(v: IntVector):
        if v in queued or v in store.members:
            return
        if max_entry is not None and max(abs(x) for x in v) > max_entry:
            raise BudgetExceeded(f"entry of size {max(abs(x) for x in v)} exceeds max_entry={max_entry}")
        queued.add(v)
        heapq.heappush(heap, (norm1(v), v))
        if len(queued) + store.size > budget:
            raise BudgetExceeded(f"completion exceeded {budget} vectors")

    for b in seed:
        push(tuple(b))
        push(tuple(-x for x in b))

    while heap:
        _, s = heapq.heappop(heap)
        queued.discard(s)
        r = store.normal_form(s)
        if not any(r) or r in store.members:
            continue
        for t in store.partners(r):
            push(tuple(int(x) for x in t))
        store.add(r)
        if store.size > budget:
            raise BudgetExceeded(f"completion exceeded {budget} vectors")

    return GraverBasis(m, tuple(sorted(_minimal_elements(store))))


def _minimal_elements(store: _ReductionSet) -> list[IntVector]:
    """Drop every stored vector that has another stored vector strictly below it."""
    split = store.split[: store.size]
    keep = []
    order = np.argsort([norm1(v) for v in store.vecs[: store.size].tolist()], kind="stable")
    for i in order:
        below = np.all(split <= split[i], axis=1)
        below[i] = False
        if not below.any():
            keep.append(tuple(int(x) for x in store.vecs[i]))
    return keep


def is_graver_element(m: IntMatrix, x: Sequence[int], budget: int = DEFAULT_ORACLE_BUDGET) -> bool:
    """Brute-force test of ``x ∈ G(m)``.

    Walks the conformal box ``{z : z ⊑ x}`` coordinate by coordinate and
    prunes any branch whose partial product ``m z`` can no longer return to
    zero. ``x`` is a Graver element iff ``m x = 0`` and the only kernel
    points in the box are ``0`` and ``x``.
    """
    x = tuple(x)
    if len(x) != m.cols:
        raise DimensionError(f"vector of length {len(x)} for {m.cols} columns")
    if not any(x):
        raise ValueError("the zero vector is never a Graver element")
    if any(m.apply(x)):
        return False
    box = 1
    for v in x:
        box *= abs(v) + 1
    if box > budget:
        raise BudgetExceeded(f"conformal box of {box} points exceeds budget {budget}")

    support = [j for j, v in enumerate(x) if v]
    cols = [m.column(j) for j in support]
    # reach_lo/hi[k][i]: range of row i over the coordinates support[k:]
    reach_lo = [[0] * m.rows for _ in range(len(support) + 1)]
    reach_hi = [[0] * m.rows for _ in range(len(support) + 1)]
    for k in range(len(support) - 1, -1, -1):
        xv = x[support[k]]
        for i in range(m.rows):
            a, b = 0, cols[k][i] * xv
            reach_lo[k][i] = reach_lo[k + 1][i] + min(a, b)
            reach_hi[k][i] = reach_hi[k + 1][i] + max(a, b)

    target = len(support)

    def search(k: int, partial: list[int], nonzero: bool, full: bool) -> bool:
        """True if a kernel point other than 0 and x exists below this prefix."""
        if k == target:
            return nonzero and not full and not any(partial)
        for i in range(m.rows):
            if not reach_lo[k][i] <= -partial[i] <= reach_hi[k][i]:
                return False
        xv = x[support[k]]
        step = 1 if xv > 0 else -1
        col = cols[k]
        for z in range(0, xv + step, step):
            nxt = [p + z * c for p, c in zip(partial, col)]
            if search(k + 1, nxt, nonzero or z != 0, full and z == xv):
                return True
        return False

    return not search(0, [0] * m.rows, False, True)


def circuits(m: IntMatrix, max_columns: int = DEFAULT_CIRCUIT_COLUMNS) -> CircuitSet:
    """All support-minimal kernel vectors with coprime entries, both signs."""
    if m.cols > max_columns:
        raise BudgetExceeded(f"{m.cols} columns exceed the circuit budget of {max_columns}")
    r = rank(m)
    found: set[IntVector] = set()
    cols = [m.column(j) for j in range(m.cols)]
    for size in range(1, min(r + 1, m.cols) + 1):
        for subset in itertools.combinations(range(m.cols), size):
            sub = IntMatrix.from_columns([cols[j] for j in subset], rows=m.rows)
            kernel = integer_kernel_basis(sub)
            if len(kernel) != 1 or not all(kernel[0]):
                continue
            v = [0] * m.cols
            for j, val in zip(subset, primitive_part(kernel[0])):
                v[j] = val
            c = canonical_sign(v)
            found.add(c)
            found.add(tuple(-a for a in c))
    return CircuitSet(m, tuple(sorted(found)))


def graver_columns(A: IntMatrix, B: IntMatrix | None = None, both_signs: bool = False,
                   budget: int = DEFAULT_COMPLETION_BUDGET) -> IntMatrix:
    """Matrix whose columns are ``B v`` for ``v`` in ``G(A)``.

    With ``both_signs=False`` one column per ``±`` pair is used.
    """
    if B is None:
        B = IntMatrix.identity(A.cols)
    if A.cols != B.cols:
        raise DimensionError(f"A has {A.cols} columns but B has {B.cols}")
    basis = graver_basis(A, budget=budget)
    vs = list(basis) if both_signs else basis.representatives()
    return IntMatrix.from_columns([B.apply(v) for v in vs], rows=B.rows)


def graver_complexity(A: IntMatrix, B: IntMatrix | None = None, both_signs: bool = True,
                      budget: int = DEFAULT_COMPLETION_BUDGET) -> int:
    """Maximum 1-norm over ``G(B G(A))``; 0 when ``G(A)`` is empty.

    ``both_signs`` selects whether ``G(A)`` contributes ``v`` and ``-v`` as
    columns or only one of them. The completion always runs on the
    one-per-pair matrix: doubling a column ``c`` into ``(c, -c)`` only adds
    the 1-norm-2 elements ``e_c + e_-c`` and sign-splits of old elements
    (which keep their 1-norm), so the maximum is ``max(2, old maximum)``.
    """
    if B is None:
        B = IntMatrix.identity(A.cols)
    if A.cols != B.cols:
        raise DimensionError(f"A has {A.cols} columns but B has {B.cols}")
    cols = graver_columns(A, B, both_signs=False, budget=budget)
    if cols.cols == 0:
        return 0
    value = graver_basis(cols, budget=budget).max_norm()
    if both_signs:
        value = max(value, 2)
    return value


def conformal_decomposition(x: Sequence[int], basis: Iterable[Sequence[int]]) -> list[IntVector]:
    """Greedy conformal decomposition of a kernel vector into Graver elements.

    Repeatedly subtracts any basis element that is ``⊑`` the remainder. For
    a true Graver basis every nonzero kernel remainder has such an element,
    so the loop ends at zero; a ``ValueError`` signals it got stuck.
    """
    rest = list(x)
    basis = [tuple(b) for b in basis]
    parts: list[IntVector] = []
    while any(rest):
        g = next((b for b in basis if conforms(b, rest)), None)
        if g is None:
            raise ValueError(f"no basis element conforms to remainder {tuple(rest)}")
        rest = [a - b for a, b in zip(rest, g)]
        parts.append(g)
    return parts
