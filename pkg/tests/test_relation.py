import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graverlift import formats
from graverlift.errors import DimensionError, NotCanonicalizable
from graverlift.nfold import BrickVector
from graverlift.relation import (MEMBER_FALSE, MEMBER_TRUE, MEMBER_UNVERIFIED, PrimitiveRelation,
                                 canonicalize_for_lift, lemma2_bound, normalize_signs,
                                 permute_relation_bricks, verify_membership,
                                 verify_primitive, verify_relation, x0_candidates)

from oracles import sympy_nullspace


def _with(rel, elements=None, coefficients=None):
    return PrimitiveRelation(rel.base_matrix, rel.copies,
                             rel.elements if elements is None else tuple(elements),
                             rel.coefficients if coefficients is None else tuple(coefficients))


class TestVerifyPrimitive:
    def test_base_relation(self, base):
        report = verify_relation(base)
        assert report.ok
        assert report.membership is None

    def test_scaled_coefficients(self, base):
        report = verify_primitive(base.elements, (2, 6, 10, 4, 6, 12, 14))
        assert report.sum_zero and report.nonzero and report.kernel_dim_one
        assert not report.coprime
        assert not report.ok

    def test_pair(self, base):
        x = base.elements[2]
        assert verify_primitive([x, -x], [1, 1]).ok

    def test_zero_coefficient(self, base):
        x = base.elements[2]
        assert not verify_primitive([x, -x, x], [1, 1, 0]).ok

    def test_dependent_subset(self, base):
        x = base.elements[2]
        # x, -x, 2x: a proper subset is dependent so the kernel has dimension 2
        report = verify_primitive([x, -x, 2 * x], [1, 1, 0])
        assert not report.kernel_dim_one

    def test_wrong_sum(self, base):
        assert not verify_primitive(base.elements, (1, 3, 5, 2, 3, 6, 8)).sum_zero

    def test_dimension_errors(self, base):
        with pytest.raises(DimensionError):
            verify_primitive(base.elements, (1, 2))
        with pytest.raises(DimensionError):
            verify_primitive([(1, 0), (1, 0, 0)], (1, 1))

    def test_golden(self, golden_name):
        assert verify_relation(formats.golden_relation(golden_name)).ok


class TestMembership:
    def test_base_relation(self, base):
        assert verify_membership(base).membership == [MEMBER_TRUE] * 7

    def test_two_cycle_sum_flagged(self, base):
        bad = BrickVector.from_table([(0, 1, -1), (0, -1, 1), (1, -1, 0), (-1, 1, 0)])
        rel = _with(base, elements=[*base.elements[:6], bad], coefficients=base.coefficients)
        report = verify_membership(rel)
        assert report.membership[:6] == [MEMBER_TRUE] * 6
        assert report.membership[6] == MEMBER_FALSE
        assert not report.ok

    def test_m5(self):
        report = verify_membership(formats.golden_relation("a3m_m5"))
        assert report.membership == [MEMBER_TRUE] * 9

    def test_large_M_is_unverified(self, base):
        from graverlift.lift import lift_chain
        rel = lift_chain(base, 2, 8)
        report = verify_membership(rel)
        assert report.membership == [MEMBER_UNVERIFIED] * len(rel.elements)
        assert report.ok and "not checked" in report.notes[0]

    def test_limit_can_be_lowered(self, base):
        assert verify_membership(base, max_copies=3).membership == [MEMBER_UNVERIFIED] * 7

    def test_budget_reported_per_element(self, base):
        report = verify_membership(base, budget=10)
        assert all(m == "budget-exceeded" for m in report.membership)
        assert len(report.notes) == 7
        assert not report.ok


class TestLemma2:
    def test_base(self, base):
        assert lemma2_bound(base) == 27

    def test_pair(self, base):
        x = base.elements[0]
        assert lemma2_bound(_with(base, [x, -x], [1, 1])) == 2

    def test_m6(self):
        assert lemma2_bound(formats.golden_relation("a3m_m6")) == 171


class TestNormalizeSigns:
    def test_already_positive(self, base):
        x = base.elements[0]
        rel = _with(base, [x, -x], [1, 1])
        assert normalize_signs(rel) == rel

    def test_flip(self, base):
        x = base.elements[0]
        assert normalize_signs(_with(base, [x, x], [1, -1])) == _with(base, [x, -x], [1, 1])

    @given(st.lists(st.booleans(), min_size=7, max_size=7))
    def test_random_flips(self, flips):
        base = formats.golden_relation("base_a34")
        elements = [-x if f else x for f, x in zip(flips, base.elements)]
        coefficients = [-h if f else h for f, h in zip(flips, base.coefficients)]
        flipped = _with(base, elements, coefficients)
        assert verify_relation(flipped).ok
        norm = normalize_signs(flipped)
        assert all(h > 0 for h in norm.coefficients)
        assert sorted(norm.coefficients) == sorted(abs(h) for h in base.coefficients)
        assert norm.weighted_sum().is_zero()
        assert verify_relation(norm).ok
        assert lemma2_bound(norm) == lemma2_bound(flipped)


@given(st.permutations(range(4)))
def test_brick_permutation_keeps_primitivity(perm):
    base = formats.golden_relation("base_a34")
    moved = permute_relation_bricks(base, perm)
    assert verify_relation(moved).ok
    assert lemma2_bound(moved) == 27


class TestCanonicalize:
    def test_base_identity(self, base):
        rel, perm = canonicalize_for_lift(base, 2)
        assert perm == [0, 1, 2, 3]
        assert rel == base
        assert rel.coefficients[1:3] == (3, 5)

    @given(st.permutations(range(4)), st.integers(0, 6))
    @settings(max_examples=60, deadline=None)
    def test_recovers_shape(self, perm, x0_pos):
        from graverlift.lift import check_conditions
        base = formats.golden_relation("base_a34")
        moved = permute_relation_bricks(base, perm)
        order = list(range(1, 7))
        order.insert(x0_pos, 0)
        shuffled = _with(moved, [moved.elements[i] for i in order], [moved.coefficients[i] for i in order])
        rel, p = canonicalize_for_lift(shuffled, 2, x0_index=x0_pos)
        assert sorted(p) == [0, 1, 2, 3]
        cert = check_conditions(rel, 2)
        assert cert.ok and (cert.g, cert.s) == (3, 7)
        assert lemma2_bound(rel) == 27
        assert verify_relation(rel).ok

    def test_interleaved_zero_brick(self, base):
        # zero brick of x0 moved to the front
        moved = permute_relation_bricks(base, [2, 0, 1, 3])
        rel, perm = canonicalize_for_lift(moved, 2)
        assert rel == base
        assert perm == [1, 2, 0, 3]

    def test_too_many(self, base):
        with pytest.raises(NotCanonicalizable) as err:
            canonicalize_for_lift(base, 3)
        assert err.value.reason == "insufficient-eligible"

    def test_bad_x0(self, base):
        x = base.elements[0]
        pair = _with(base, [x.__class__.from_table([(1, -1, 0), (-1, 1, 0), (0, 0, 0), (0, 0, 0)])] * 2, [1, -1])
        with pytest.raises(NotCanonicalizable) as err:
            canonicalize_for_lift(pair, 0)
        assert err.value.reason == "x0-shape"

    def test_x0_candidates(self, base):
        assert x0_candidates(base) == list(range(7))


@pytest.mark.parametrize("seed", range(10))
def test_lemma1_proportional(golden_name, seed):
    rel = formats.golden_relation(golden_name)
    rng = random.Random(seed)
    signs = [rng.choice((-1, 1)) for _ in rel.elements]
    columns = [[s * a for a in x.entries] for s, x in zip(signs, rel.elements)]
    expected = [s * h for s, h in zip(signs, rel.coefficients)]
    (null,) = sympy_nullspace(columns)
    assert null in (tuple(expected), tuple(-h for h in expected))
