"""Primitive relations on Graver elements of M-fold matrices.

A relation ``sum h_i x^i = 0`` is primitive when the ``h_i`` are nonzero and
coprime and no proper subset of the ``x^i`` is linearly dependent. The last
condition is the same as the matrix with columns ``x^i`` having a
one-dimensional rational kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import BudgetExceeded, DimensionError, NotCanonicalizable
from .exact import IntMatrix, gcd_all, rational_kernel_dimension
from .graver import DEFAULT_ORACLE_BUDGET, is_graver_element
from .nfold import BrickVector, assemble_mfold, permute_bricks, type_of


@dataclass(frozen=True)
class PrimitiveRelation:
    """``sum coefficients[i] * elements[i] == 0`` over ``A^(copies)``.

    Construction only checks shapes; use :func:`verify_primitive` and
    :func:`verify_membership` for the mathematical claims.
    """

    base_matrix: IntMatrix
    copies: int
    elements: tuple[BrickVector, ...]
    coefficients: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        if len(self.elements) != len(self.coefficients):
            raise DimensionError(
                f"{len(self.elements)} elements but {len(self.coefficients)} coefficients"
            )
        for x in self.elements:
            if (x.copies, x.brick_len) != (self.copies, self.base_matrix.cols):
                raise DimensionError(
                    f"element of shape {x.copies}x{x.brick_len} in a relation over "
                    f"{self.copies}x{self.base_matrix.cols} tables"
                )

    @property
    def k(self) -> int:
        """Index of the last element (there are ``k + 1`` of them)."""
        return len(self.elements) - 1

    def weighted_sum(self) -> BrickVector:
        total = BrickVector.zero(self.copies, self.base_matrix.cols)
        for h, x in zip(self.coefficients, self.elements):
            total = total + h * x
        return total

    def coefficient_sum(self) -> int:
        return sum(abs(h) for h in self.coefficients)

    def matrix(self) -> IntMatrix:
        return assemble_mfold(self.base_matrix, self.copies)


MEMBER_TRUE = "true"
MEMBER_FALSE = "false"
MEMBER_BUDGET = "budget-exceeded"
MEMBER_UNVERIFIED = "unverified"

# The oracle is exhaustive, so past this many copies it is skipped by default.
MEMBERSHIP_MAX_COPIES = 7


@dataclass
class VerificationReport:
    """Outcome of the checks that were actually run; ``None`` means not run."""

    sum_zero: bool | None = None
    coprime: bool | None = None
    nonzero: bool | None = None
    kernel_dim_one: bool | None = None
    membership: list[str] | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        checks = [c for c in (self.sum_zero, self.coprime, self.nonzero, self.kernel_dim_one) if c is not None]
        if self.membership is not None:
            checks += [m in (MEMBER_TRUE, MEMBER_UNVERIFIED) for m in self.membership]
        return bool(checks) and all(checks)

    def merge(self, other: VerificationReport) -> VerificationReport:
        pick = lambda a, b: b if b is not None else a  # noqa: E731
        return VerificationReport(
            pick(self.sum_zero, other.sum_zero),
            pick(self.coprime, other.coprime),
            pick(self.nonzero, other.nonzero),
            pick(self.kernel_dim_one, other.kernel_dim_one),
            pick(self.membership, other.membership),
            self.notes + other.notes,
        )

    def lines(self) -> list[str]:
        out = []
        for name in ("sum_zero", "coprime", "nonzero", "kernel_dim_one"):
            val = getattr(self, name)
            if val is not None:
                out.append(f"{name:<15} {'ok' if val else 'FAILED'}")
        if self.membership is not None:
            for i, m in enumerate(self.membership):
                out.append(f"member[{i}]{'':<6} {m}")
        out.extend(self.notes)
        out.append(f"verdict         {'VALID' if self.ok else 'INVALID'}")
        return out


def _flat(x) -> tuple[int, ...]:
    return x.entries if isinstance(x, BrickVector) else tuple(x)


def verify_primitive(elements: Sequence, coefficients: Sequence[int]) -> VerificationReport:
    """Check the algebraic part of primitivity (no Graver membership)."""
    if len(elements) != len(coefficients):
        raise DimensionError(f"{len(elements)} elements but {len(coefficients)} coefficients")
    vecs = [_flat(x) for x in elements]
    if not vecs:
        return VerificationReport(sum_zero=True, coprime=False, nonzero=False, kernel_dim_one=False)
    n = len(vecs[0])
    if any(len(v) != n for v in vecs):
        raise DimensionError("elements of different ambient dimension")
    total = [0] * n
    for h, v in zip(coefficients, vecs):
        for j, a in enumerate(v):
            total[j] += h * a
    columns = IntMatrix.from_columns(vecs, rows=n)
    return VerificationReport(
        sum_zero=not any(total),
        coprime=gcd_all(coefficients) == 1,
        nonzero=all(h != 0 for h in coefficients),
        kernel_dim_one=rational_kernel_dimension(columns) == 1,
    )


def verify_relation(rel: PrimitiveRelation) -> VerificationReport:
    return verify_primitive(rel.elements, rel.coefficients)


def verify_membership(rel: PrimitiveRelation, budget: int = DEFAULT_ORACLE_BUDGET,
                      max_copies: int | None = MEMBERSHIP_MAX_COPIES) -> VerificationReport:
    """Run the brute-force Graver oracle on every element of ``rel``.

    Relations over more than ``max_copies`` copies are not searched; each
    element is then reported as ``unverified`` (``None`` removes the limit).
    """
    if max_copies is not None and rel.copies > max_copies:
        return VerificationReport(
            membership=[MEMBER_UNVERIFIED] * len(rel.elements),
            notes=[f"membership asserted by the lift construction, not checked for M = {rel.copies} > {max_copies}"],
        )
    m = rel.matrix()
    status = []
    notes = []
    for i, x in enumerate(rel.elements):
        if x.is_zero():
            status.append(MEMBER_FALSE)
            notes.append(f"element {i} is zero")
            continue
        try:
            status.append(MEMBER_TRUE if is_graver_element(m, x.entries, budget=budget) else MEMBER_FALSE)
        except BudgetExceeded as exc:
            status.append(MEMBER_BUDGET)
            notes.append(f"element {i}: {exc}")
    return VerificationReport(membership=status, notes=notes)


def lemma2_bound(rel: PrimitiveRelation) -> int:
    """Lower bound ``sum |h_i|`` on the Graver complexity of ``A^(M)``."""
    return rel.coefficient_sum()


def normalize_signs(rel: PrimitiveRelation) -> PrimitiveRelation:
    """Make every coefficient positive by negating the matching elements."""
    elements = tuple(-x if h < 0 else x for h, x in zip(rel.coefficients, rel.elements))
    coefficients = tuple(abs(h) for h in rel.coefficients)
    return PrimitiveRelation(rel.base_matrix, rel.copies, elements, coefficients)


def canonical_representative(rel: PrimitiveRelation) -> PrimitiveRelation:
    """Global sign choice: first coefficient positive.

    Use :func:`normalize_signs` when all-positive coefficients are wanted.
    """
    if rel.coefficients and rel.coefficients[0] < 0:
        return PrimitiveRelation(rel.base_matrix, rel.copies, rel.elements, tuple(-h for h in rel.coefficients))
    return rel


def permute_relation_bricks(rel: PrimitiveRelation, perm: Sequence[int]) -> PrimitiveRelation:
    return PrimitiveRelation(
        rel.base_matrix, rel.copies, tuple(permute_bricks(x, perm) for x in rel.elements), rel.coefficients
    )


def bricks_form_primitive_relation(x: BrickVector) -> bool:
    """Whether the nonzero bricks of ``x`` satisfy only the all-ones relation."""
    bricks = [b for b in x.bricks if any(b)]
    if len(bricks) < 2:
        return False
    total = [sum(col) for col in zip(*bricks)]
    if any(total):
        return False
    return rational_kernel_dimension(IntMatrix.from_columns(bricks, rows=x.brick_len)) == 1


def x0_candidates(rel: PrimitiveRelation) -> list[int]:
    """Indices of elements usable as ``x^0``: type above 2, bricks primitively dependent."""
    return [
        i for i, x in enumerate(rel.elements)
        if type_of(x) > 2 and bricks_form_primitive_relation(x)
    ]


def canonicalize_for_lift(rel: PrimitiveRelation, l: int, x0_index: int = 0) -> tuple[PrimitiveRelation, list[int]]:
    """Bring ``rel`` into the shape the lift expects.

    Moves element ``x0_index`` to the front and permutes bricks (of all
    elements at once) so that the nonzero bricks of ``x^0`` sit in positions
    ``0 .. g-2`` and ``M-1``. The brick sent to position ``M-1`` is the
    highest-indexed nonzero brick of ``x^0`` for which at least ``l`` other
    elements carry its negative at the same position; those elements are
    then moved right after ``x^0``, keeping their relative order.

    Returns the new relation and the brick permutation ``perm`` (new brick
    ``i`` is old brick ``perm[i]``).

    Raises:
        NotCanonicalizable: ``reason`` is ``"x0-shape"`` or ``"insufficient-eligible"``.
    """
    if not 0 <= x0_index < len(rel.elements):
        raise NotCanonicalizable("x0-shape", f"x0 index {x0_index} out of range")
    if l < 0:
        raise NotCanonicalizable("insufficient-eligible", f"l must be nonnegative, got {l}")
    x0 = rel.elements[x0_index]
    others = [i for i in range(len(rel.elements)) if i != x0_index]
    nonzero = [b for b in range(x0.copies) if any(x0.brick(b))]
    if len(nonzero) < 3:
        raise NotCanonicalizable("x0-shape", f"x0 has type {len(nonzero)}, need more than 2")

    def eligible(pos: int) -> list[int]:
        target = tuple(-a for a in x0.brick(pos))
        return [i for i in others if rel.elements[i].brick(pos) == target]

    last = next((p for p in reversed(nonzero) if len(eligible(p)) >= l), None)
    if last is None:
        best = max(len(eligible(p)) for p in nonzero)
        raise NotCanonicalizable(
            "insufficient-eligible", f"need {l} elements ending in -x_g, at most {best} available"
        )
    zero = [b for b in range(x0.copies) if b not in nonzero]
    perm = [p for p in nonzero if p != last] + zero + [last]

    front = eligible(last)
    order = [x0_index] + front + [i for i in others if i not in front]
    moved = PrimitiveRelation(
        rel.base_matrix,
        rel.copies,
        tuple(rel.elements[i] for i in order),
        tuple(rel.coefficients[i] for i in order),
    )
    return permute_relation_bricks(moved, perm), perm
