"""Lifting primitive relations from ``A^(M)`` to ``A^(M+1)`` and the resulting bounds.

A relation ``sum h_i x^i = 0`` (all ``h_i > 0``) can be lifted when

(a) ``x^0`` has type ``g > 2`` with nonzero bricks ``x_1 .. x_{g-1}`` in the
    first ``g - 1`` positions and ``x_g`` in the last one, and those bricks
    satisfy only the all-ones relation;
(b) the last brick of ``x^1 .. x^l`` is ``-x_g``;
(c) ``s = h_1 + ... + h_l - h_0`` is coprime to ``g - 1``.

The lifted relation has ``k + g`` elements and coefficient sum
``(g-1) * sum(h) + (2g-3) s`` for ``s >= 0`` and ``(g-1) * sum(h) - s``
otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .errors import ConditionsFailed, InternalError, NoCircuitOfSupport3
from .exact import IntMatrix, gcd_all
from .graver import DEFAULT_COMPLETION_BUDGET, circuits, graver_basis
from .nfold import (BrickVector, append_zero_brick, from_bricks, move_last_brick,
                    type_of)
from .relation import PrimitiveRelation, bricks_form_primitive_relation


@dataclass(frozen=True)
class LiftCertificate:
    g: int
    l: int
    s: int
    condition_a: bool
    condition_b: bool
    condition_c: bool
    diagnostics: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.condition_a and self.condition_b and self.condition_c


def check_conditions(rel: PrimitiveRelation, l: int) -> LiftCertificate:
    """Evaluate conditions (a), (b), (c) for lifting ``rel`` with the first ``l`` elements."""
    diagnostics = []
    h = rel.coefficients
    x0 = rel.elements[0]
    M = rel.copies
    g = type_of(x0)
    if not 0 <= l <= rel.k:
        diagnostics.append(f"l={l} outside 0..{rel.k}")
        l_eff = max(0, min(l, rel.k))
    else:
        l_eff = l
    s = sum(h[1:l_eff + 1]) - h[0]

    if any(c <= 0 for c in h):
        diagnostics.append("coefficients must all be positive (normalize signs first)")

    # (a)
    shape_ok = g > 2 and all(any(x0.brick(i)) for i in range(g - 1)) and any(x0.brick(M - 1))
    if g <= 2:
        diagnostics.append(f"(a) type of x0 is {g}, need > 2")
    elif not shape_ok:
        diagnostics.append("(a) x0 nonzero bricks are not at positions 1..g-1 and M")
    primitive_ok = bricks_form_primitive_relation(x0)
    if g > 2 and not primitive_ok:
        diagnostics.append("(a) bricks of x0 do not form a primitive all-ones relation")
    cond_a = shape_ok and primitive_ok and all(c > 0 for c in h)

    # (b)
    x_g = x0.brick(M - 1)
    neg = tuple(-a for a in x_g)
    bad = [i for i in range(1, l_eff + 1) if rel.elements[i].brick(M - 1) != neg]
    if bad:
        diagnostics.append(f"(b) last brick of elements {bad} is not -x_g")
    cond_b = not bad and l == l_eff

    # (c)
    cond_c = g > 2 and math.gcd(g - 1, s) == 1
    if not cond_c:
        diagnostics.append(f"(c) gcd(g-1, s) = gcd({g - 1}, {s}) = {math.gcd(g - 1, s)}")

    return LiftCertificate(g, l, s, cond_a, cond_b, cond_c, tuple(diagnostics))


def _new_elements(x0: BrickVector, g: int, sign: int) -> list[BrickVector]:
    M, c = x0.copies, x0.brick_len
    xs = [x0.brick(i) for i in range(g - 1)] + [x0.brick(M - 1)]
    zero = (0,) * c
    out = []
    for j in range(g - 1):
        bricks = [zero if i == j else xs[i] for i in range(g - 1)]
        bricks += [zero] * (M - g)
        bricks += [xs[g - 1], xs[j]]
        out.append(sign * from_bricks(bricks, c))
    return out


def lift(rel: PrimitiveRelation, cert: LiftCertificate) -> PrimitiveRelation:
    """Build the lifted relation on ``A^(M+1)``.

    Output order: lifted ``x^0 .. x^k`` first, then the ``g - 1`` new
    elements for ``j = 1 .. g-1``.
    """
    if not cert.ok:
        raise ConditionsFailed("lift conditions not satisfied: " + "; ".join(cert.diagnostics), certificate=cert)
    g, l, s = cert.g, cert.l, cert.s
    h = rel.coefficients
    elements = [move_last_brick(x) for x in rel.elements[:l + 1]]
    elements += [append_zero_brick(x) for x in rel.elements[l + 1:]]
    elements += _new_elements(rel.elements[0], g, -1 if s >= 0 else 1)

    h0 = (g - 1) * h[0] + (g - 2) * s
    if h0 <= 0:
        raise InternalError(f"lifted leading coefficient {h0} is not positive")
    coefficients = [h0] + [(g - 1) * hi for hi in h[1:]] + [abs(s)] * (g - 1)
    if gcd_all(coefficients) != 1:
        raise InternalError(f"lifted coefficients share the factor {gcd_all(coefficients)}")
    return PrimitiveRelation(rel.base_matrix, rel.copies + 1, tuple(elements), tuple(coefficients))


def theorem1_sum(sum_h: int, g: int, s: int) -> int:
    """Coefficient sum of a lifted relation from the sum before lifting."""
    if s >= 0:
        return (g - 1) * sum_h + (2 * g - 3) * s
    return (g - 1) * sum_h - s


def lift_steps(rel: PrimitiveRelation, l: int, target_M: int,
               switch: tuple[int, int] | None = None) -> Iterator[PrimitiveRelation]:
    """Yield the relation after each lift until ``target_M`` copies.

    ``switch=(at_M0, new_l)`` changes ``l`` once the relation lives on
    ``at_M0`` copies; ``s`` is recomputed from the new ``l`` at that point.
    """
    if switch is not None and switch[0] > target_M:
        raise ValueError(f"switch point {switch[0]} beyond target {target_M}")
    if target_M < rel.copies:
        raise ValueError(f"target {target_M} below current M={rel.copies}")
    current_l = l
    step = 0
    while rel.copies < target_M:
        if switch is not None and rel.copies >= switch[0]:
            current_l = switch[1]
        cert = check_conditions(rel, current_l)
        if not cert.ok:
            raise ConditionsFailed(
                f"step {step} (M={rel.copies}): " + "; ".join(cert.diagnostics), certificate=cert, step=step
            )
        rel = lift(rel, cert)
        step += 1
        yield rel


def lift_chain(rel: PrimitiveRelation, l: int, target_M: int,
               switch: tuple[int, int] | None = None) -> PrimitiveRelation:
    for rel in lift_steps(rel, l, target_M, switch):
        pass
    return rel


@dataclass(frozen=True)
class LiftOption:
    l: int
    certificate: LiftCertificate
    next_bound: int


def discover_lifts(rel: PrimitiveRelation) -> list[LiftOption]:
    """Every ``l`` whose certificate passes, with the bound one lift would give."""
    options = []
    for l in range(rel.k + 1):
        cert = check_conditions(rel, l)
        if cert.ok:
            options.append(LiftOption(l, cert, theorem1_sum(rel.coefficient_sum(), cert.g, cert.s)))
    return options


def discover_subset_lifts(rel: PrimitiveRelation, max_l: int | None = None) -> list[tuple[tuple[int, ...], LiftOption]]:
    """Experimental: try any subset of eligible elements in the role of ``x^1 .. x^l``.

    Subsets are moved to the front (keeping relative order) before the
    certificate is checked. Not used by any default code path.
    """
    import itertools

    x0 = rel.elements[0]
    neg = tuple(-a for a in x0.brick(rel.copies - 1))
    eligible = [i for i in range(1, len(rel.elements)) if rel.elements[i].brick(rel.copies - 1) == neg]
    top = len(eligible) if max_l is None else min(max_l, len(eligible))
    found = []
    for size in range(top + 1):
        for subset in itertools.combinations(eligible, size):
            rest = [i for i in range(1, len(rel.elements)) if i not in subset]
            order = [0, *subset, *rest]
            moved = PrimitiveRelation(
                rel.base_matrix, rel.copies,
                tuple(rel.elements[i] for i in order), tuple(rel.coefficients[i] for i in order),
            )
            cert = check_conditions(moved, size)
            if cert.ok:
                found.append((subset, LiftOption(size, cert, theorem1_sum(rel.coefficient_sum(), cert.g, cert.s))))
    return found


# -- base relations ----------------------------------------------------------------

_A34_TABLES = (
    ((0, -1, 1), (1, 0, -1), (0, 0, 0), (-1, 1, 0)),
    ((0, 0, 0), (0, 1, -1), (-1, 0, 1), (1, -1, 0)),
    ((-1, 0, 1), (0, 0, 0), (0, 1, -1), (1, -1, 0)),
    ((-1, 1, 0), (0, 0, 0), (0, -1, 1), (1, 0, -1)),
    ((0, 0, 0), (0, 1, -1), (1, -1, 0), (-1, 0, 1)),
    ((0, 1, -1), (1, -1, 0), (0, 0, 0), (-1, 0, 1)),
    ((1, -1, 0), (-1, 0, 1), (0, 0, 0), (0, 1, -1)),
)
_A34_COEFFICIENTS = (1, 3, 5, 2, 3, 6, 7)


def base_relation_a34() -> PrimitiveRelation:
    """The 7-element relation on ``G(A_3x4)`` with coefficients ``(1,3,5,2,3,6,7)``."""
    return PrimitiveRelation(
        IntMatrix.from_rows([[1, 1, 1]]),
        4,
        tuple(BrickVector.from_table(t) for t in _A34_TABLES),
        _A34_COEFFICIENTS,
    )


def base_relation_cor2(A: IntMatrix, budget: int = DEFAULT_COMPLETION_BUDGET) -> PrimitiveRelation:
    """Relation of cyclic brick shifts built from a largest-support circuit of ``G(A)``.

    With ``sum c_i v_i = 0`` a circuit of the matrix whose columns are the
    Graver elements ``v_i`` (one per sign pair), ``x^0`` has bricks
    ``c_1 v_1, ..., c_g v_g`` and ``x^t`` is ``x^0`` with bricks rotated by
    ``t``. All coefficients are 1 and the relation lives on ``A^(g)``.
    """
    reps = graver_basis(A, budget=budget).representatives()
    if not reps:
        raise NoCircuitOfSupport3("G(A) is empty")
    cols = IntMatrix.from_columns(reps, rows=A.cols)
    circ = circuits(cols)
    best = max((sum(1 for a in v if a) for v in circ), default=0)
    if best < 3:
        raise NoCircuitOfSupport3(f"largest circuit support of G(A) is {best}")
    c = next(v for v in circ if sum(1 for a in v if a) == best)
    bricks = [tuple(ci * a for a in reps[j]) for j, ci in enumerate(c) if ci]
    g = len(bricks)
    elements = tuple(from_bricks(bricks[t:] + bricks[:t], A.cols) for t in range(g))
    return PrimitiveRelation(A, g, elements, (1,) * g)


# -- bounds --------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundResult:
    formula_id: str
    params: dict = field(hash=False)
    value: int
    valid_from: int


def _integral(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise InternalError(f"{what} evaluated to non-integer {value}")
    return value.numerator


def bound_cor1(sum_h: int, g: int, s: int, M0: int, M: int) -> BoundResult:
    """Bound after lifting a relation with sum ``sum_h`` on ``A^(M0)`` up to ``A^(M)``."""
    if g <= 2:
        raise ValueError(f"g must exceed 2, got {g}")
    if M < M0:
        raise ValueError(f"M={M} below M0={M0}")
    growth = (g - 1) ** (M - M0)
    if s >= 0:
        shift = Fraction((2 * g - 3) * s, g - 2)
        value = growth * (sum_h + shift) - shift
    else:
        value = growth * (sum_h + Fraction(-s, g - 2)) + Fraction(s, g - 2)
    return BoundResult("cor1", {"sum_h": sum_h, "g": g, "s": s, "M0": M0, "M": M},
                       _integral(value, "cor1 bound"), M0)


def bound_cor2(g: int, M: int) -> BoundResult:
    if g < 3:
        raise ValueError(f"g must be at least 3, got {g}")
    if M < g:
        raise ValueError(f"M={M} below g={g}")
    value = Fraction(g - 1, g - 2) * (g - 1) ** (M - (g - 1)) - Fraction(1, g - 2)
    return BoundResult("cor2", {"g": g, "M": M}, _integral(value, "cor2 bound"), g)


def bound_cor3(M: int) -> BoundResult:
    if M < 4:
        raise ValueError(f"M must be at least 4, got {M}")
    return BoundResult("cor3", {"M": M}, 24 * 2 ** (M - 3) - 21, 4)


def bound_berstein_onn(M: int) -> BoundResult:
    if M < 4:
        raise ValueError(f"M must be at least 4, got {M}")
    return BoundResult("berstein_onn", {"M": M}, 17 * 2 ** (M - 3) - 7, 4)


def bound_mixed(M0: int, M: int) -> BoundResult:
    """Bound from switching to ``l = 0, s = -h_0`` once ``M0`` copies are reached."""
    if M0 < 6:
        raise ValueError(f"M0 must be at least 6, got {M0}")
    if M < M0:
        raise ValueError(f"M={M} below M0={M0}")
    value = (28 - Fraction(224, 2 ** M0)) * 2 ** (M - 3) - (2 ** (M0 - 1) - 7)
    return BoundResult("mixed", {"M0": M0, "M": M}, _integral(value, "mixed bound"), M0)


def bound_lemma2(rel: PrimitiveRelation) -> BoundResult:
    return BoundResult("lemma2", {"M": rel.copies, "sum_h": rel.coefficient_sum()},
                       rel.coefficient_sum(), rel.copies)


@lru_cache(maxsize=None)
def _a3m_chain(M: int) -> PrimitiveRelation:
    if M == 4:
        return base_relation_a34()
    prev = _a3m_chain(M - 1)
    return lift(prev, check_conditions(prev, 2))


def a3m_relation(M: int, switch_at: int | None = None) -> PrimitiveRelation:
    """Relation on ``G(A_3xM)`` from the base relation, lifting with ``l = 2``.

    With ``switch_at`` the chain changes to ``l = 0`` from that ``M`` on.
    """
    if M < 4:
        raise ValueError(f"M must be at least 4, got {M}")
    if switch_at is None:
        return _a3m_chain(M)
    start = _a3m_chain(min(switch_at, M))
    return lift_chain(start, 0, M)
